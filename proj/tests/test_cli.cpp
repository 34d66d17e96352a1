#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "testutil.hpp"
#include "tkge/dataset.hpp"

// End-to-end checks against the built binary.

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    const fs::path out_file = fs::temp_directory_path() / "tkge_cli_out.txt";
    const std::string cmd = std::string(TKGE_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

// Writes a small fully-dated dataset in the canonical layout.
fs::path write_fixture_dir() {
    const fs::path dir = fs::temp_directory_path() / "tkge_cli_fixture";
    fs::create_directories(dir);
    const auto facts = tkge::test::toy_facts(8, 2, 24, 2024);
    const auto serialize = [](const tkge::ParsedFact& f) {
        std::string line = f.subject + "\t" + f.relation + "\t" + f.object;
        if (f.timestamp) line += "\t" + f.timestamp->canonical();
        return line;
    };
    const auto write_split = [&](const char* name, std::size_t begin, std::size_t end) {
        std::ofstream out(dir / name);
        for (std::size_t i = begin; i < end; ++i) out << serialize(facts[i]) << "\n";
    };
    write_split("train.txt", 0, 16);
    write_split("valid.txt", 16, 20);
    write_split("test.txt", 20, 24);
    return dir;
}

}  // namespace

TEST_CASE("cli end to end: inspect, train, evaluate, export") {
    const fs::path dir = write_fixture_dir();
    const fs::path run_dir = fs::temp_directory_path() / "tkge_cli_run";
    fs::remove_all(run_dir);

    SUBCASE("inspect prints counts") {
        const CliResult r = run_cli("inspect --data-dir " + dir.string() + " --dialect icews");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("entities") != std::string::npos);
        CHECK(r.output.find("train          16") != std::string::npos);
    }

    SUBCASE("train + evaluate + export round trip") {
        const std::string train_cmd = "train --data-dir " + dir.string() +
                                      " --scorer ta_transe --d 8 --lr 0.05 --epochs 5 "
                                      "--batch-size 8 --negatives 3 --validate-every 0 --seed 3 --out " +
                                      run_dir.string();
        const CliResult t = run_cli(train_cmd);
        INFO(t.output);
        CHECK(t.exit_code == 0);
        CHECK(fs::exists(run_dir / "checkpoint.bin"));
        CHECK(fs::exists(run_dir / "config.json"));
        CHECK(fs::exists(run_dir / "train_log.jsonl"));

        // The resolved config is persisted with the flag overrides applied.
        std::ifstream cfg_in(run_dir / "config.json");
        std::ostringstream cfg_buf;
        cfg_buf << cfg_in.rdbuf();
        CHECK(cfg_buf.str().find("\"scorer\": \"ta_transe\"") != std::string::npos);
        CHECK(cfg_buf.str().find("\"d\": 8") != std::string::npos);

        const CliResult e = run_cli("evaluate --checkpoint " + (run_dir / "checkpoint.bin").string() +
                                    " --data-dir " + dir.string() + " --split test --out " +
                                    (run_dir / "eval").string());
        INFO(e.output);
        CHECK(e.exit_code == 0);
        CHECK(e.output.find("filtered") != std::string::npos);
        CHECK(fs::exists(run_dir / "eval" / "metrics.tsv"));
        CHECK(fs::exists(run_dir / "eval" / "ranks.tsv"));

        const CliResult x = run_cli("export-embeddings --checkpoint " +
                                    (run_dir / "checkpoint.bin").string() + " --data-dir " + dir.string() +
                                    " --what entities --out " + (run_dir / "entities.csv").string());
        CHECK(x.exit_code == 0);
        std::ifstream csv(run_dir / "entities.csv");
        std::string header;
        std::getline(csv, header);
        CHECK(header == "id,label,v_0,v_1,v_2,v_3,v_4,v_5,v_6,v_7");
        int rows = 0;
        std::string line;
        while (std::getline(csv, line)) ++rows;
        CHECK(rows == 8);
    }

    SUBCASE("identical seeds give byte-identical checkpoints") {
        const fs::path run_a = fs::temp_directory_path() / "tkge_cli_run_a";
        const fs::path run_b = fs::temp_directory_path() / "tkge_cli_run_b";
        fs::remove_all(run_a);
        fs::remove_all(run_b);
        const std::string base = "train --data-dir " + dir.string() +
                                 " --scorer distmult --d 6 --epochs 3 --batch-size 8 --negatives 3 "
                                 "--validate-every 0 --seed 11 --out ";
        CHECK(run_cli(base + run_a.string()).exit_code == 0);
        CHECK(run_cli(base + run_b.string()).exit_code == 0);
        std::ifstream fa(run_a / "checkpoint.bin", std::ios::binary);
        std::ifstream fb(run_b / "checkpoint.bin", std::ios::binary);
        std::ostringstream ba, bb;
        ba << fa.rdbuf();
        bb << fb.rdbuf();
        CHECK(ba.str() == bb.str());
        CHECK(!ba.str().empty());
        fs::remove_all(run_a);
        fs::remove_all(run_b);
    }

    SUBCASE("config file drives a run and flags stay optional") {
        const fs::path cfg_path = fs::temp_directory_path() / "tkge_cli_cfg.json";
        const fs::path run_c = fs::temp_directory_path() / "tkge_cli_run_c";
        fs::remove_all(run_c);
        {
            std::ofstream cfg(cfg_path);
            cfg << "{\n"
                << "  \"dataset\": {\"train\": \"" << (dir / "train.txt").string() << "\",\n"
                << "    \"valid\": \"" << (dir / "valid.txt").string() << "\",\n"
                << "    \"test\": \"" << (dir / "test.txt").string() << "\",\n"
                << "    \"dialect\": \"icews\"},\n"
                << "  \"model\": {\"scorer\": \"distmult\", \"d\": 4},\n"
                << "  \"train\": {\"max_epochs\": 2, \"batch_size\": 8, \"num_negatives\": 2,\n"
                << "    \"validate_every\": 0, \"seed\": 5}\n"
                << "}\n";
        }
        const CliResult r = run_cli("train --config " + cfg_path.string() + " --out " + run_c.string());
        INFO(r.output);
        CHECK(r.exit_code == 0);
        std::ifstream cfg_in(run_c / "config.json");
        std::ostringstream buf;
        buf << cfg_in.rdbuf();
        // The resolved config keeps the file's dialect when no flag overrides it.
        CHECK(buf.str().find("\"dialect\": \"icews\"") != std::string::npos);
        CHECK(buf.str().find("\"scorer\": \"distmult\"") != std::string::npos);
        fs::remove_all(run_c);
        fs::remove(cfg_path);
    }

    SUBCASE("usage errors exit 1") {
        CHECK(run_cli("train --data-dir " + dir.string() + " --scorer bogus").exit_code == 1);
        CHECK(run_cli("no-such-command").exit_code == 1);
    }

    SUBCASE("missing dataset files exit 2 and list the expected names") {
        const fs::path empty = fs::temp_directory_path() / "tkge_cli_empty";
        fs::create_directories(empty);
        const CliResult r = run_cli("inspect --data-dir " + empty.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("train.txt") != std::string::npos);
    }

    SUBCASE("checkpoint/dataset vocabulary mismatch exits 2 with a clear message") {
        const fs::path run_m = fs::temp_directory_path() / "tkge_cli_run_m";
        fs::remove_all(run_m);
        CHECK(run_cli("train --data-dir " + dir.string() +
                      " --scorer transe --d 4 --epochs 1 --batch-size 8 --negatives 2 "
                      "--validate-every 0 --out " +
                      run_m.string())
                  .exit_code == 0);
        // Evaluate against a dataset with a different entity vocabulary.
        const fs::path other = fs::temp_directory_path() / "tkge_cli_other";
        fs::create_directories(other);
        for (const char* name : {"train.txt", "valid.txt", "test.txt"}) {
            std::ofstream out(other / name);
            out << "x\tr\ty\n";
        }
        const CliResult r = run_cli("evaluate --checkpoint " + (run_m / "checkpoint.bin").string() +
                                    " --data-dir " + other.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("mismatch") != std::string::npos);
        fs::remove_all(run_m);
    }
}
