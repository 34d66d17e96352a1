#pragma once

#include <string>

#include "tkge/dataset.hpp"
#include "tkge/training.hpp"

namespace tkge {

// Everything one run needs; serializable to a single human-editable JSON
// file. Flags override file values and the resolved merge is written back
// into the output directory.
struct RunConfig {
    std::string train_path;
    std::string valid_path;
    std::string test_path;
    Dialect dialect = Dialect::Plain;
    TrainConfig train;
    std::string output_dir = "run";

    std::string to_json() const;                       // pretty-printed
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
};

}  // namespace tkge
