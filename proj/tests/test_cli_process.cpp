// End-to-end checks of the installed command-line interface, driven through
// a real subprocess so argument parsing, exit codes, and artifact layout are
// exercised exactly as a user sees them. The binary path arrives as the
// first positional argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dipstop/dip/engine.hpp"
#include "dipstop/image.hpp"
#include "dipstop/pipeline/trace.hpp"
#include "dipstop/png_io.hpp"
#include "dipstop/quality/backbone.hpp"
#include "dipstop/quality/score_model.hpp"
#include "dipstop/rng.hpp"
#include "dipstop/synth.hpp"

namespace fs = std::filesystem;
using namespace dipstop;

static std::string g_dipstop;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args, const fs::path& scratch) {
  fs::create_directories(scratch);
  const fs::path out_f = scratch / "stdout.txt";
  const fs::path err_f = scratch / "stderr.txt";
  const std::string cmd =
      g_dipstop + " " + args + " >" + out_f.string() + " 2>" + err_f.string();
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_f);
  r.err = slurp(err_f);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// A small but genuine scorer checkpoint: random weights are fine for
// exercising the command plumbing.
void write_tiny_model(const fs::path& path) {
  quality::BackboneSpec spec;
  spec.stem_filters = 4;
  spec.blocks = {{6, 2}, {8, 2}};
  quality::ScoreModel model(spec);
  Rng rng(1234);
  auto init = rng.stream("init");
  model.net.init(init);
  model.meta.schedule.input_resize = 24;
  model.meta.schedule.train_crop = 20;
  quality::save_model(model, path);
}

void write_noisy_png(const fs::path& path, std::uint64_t seed) {
  Rng rng(seed);
  Image clean = synth::random_scene(16, 16, rng);
  Image noisy = synth::add_gaussian_noise(clean, 0.1f, rng);
  write_png(path.string(), noisy);
}

// Desk-scale network flags shared by the denoise invocations.
const char* kTinyDip =
    "--depth 1 --filters 8 --skip-filters 4 --input-channels 8 ";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bare invocation and unknown commands are usage errors") {
  const fs::path dir = fresh_dir("dipstop-cli-usage");
  CHECK(run_cli("", dir).exit_code == 2);
  CHECK(run_cli("frobnicate", dir).exit_code == 2);
  CHECK(run_cli("denoise", dir).exit_code == 2);  // missing required options
  CHECK(run_cli("denoise --input missing.png", dir).exit_code == 2);
}

TEST_CASE("help exits cleanly and lists the subcommands") {
  const fs::path dir = fresh_dir("dipstop-cli-help");
  const CmdResult r = run_cli("--help", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("denoise") != std::string::npos);
  CHECK(r.out.find("make-corpus") != std::string::npos);
  CHECK(r.out.find("train") != std::string::npos);
  CHECK(r.out.find("evaluate") != std::string::npos);
  CHECK(r.out.find("warmstart-study") != std::string::npos);
  CHECK(r.out.find("init-backbone") != std::string::npos);
}

TEST_CASE("missing input files are runtime errors, not crashes") {
  const fs::path dir = fresh_dir("dipstop-cli-missing");
  write_tiny_model(dir / "model.bin");
  const CmdResult r = run_cli("denoise -i " + (dir / "absent.png").string() +
                                  " -m " + (dir / "model.bin").string() +
                                  " -o " + (dir / "out").string(),
                              dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("a run too short to declare a stop exits through the backstop") {
  const fs::path dir = fresh_dir("dipstop-cli-backstop");
  write_tiny_model(dir / "model.bin");
  write_noisy_png(dir / "noisy.png", 31);

  const std::string cmd =
      "denoise -i " + (dir / "noisy.png").string() + " -m " +
      (dir / "model.bin").string() + " -o " + (dir / "out").string() + " " +
      kTinyDip +
      "--max-iters 10 --eval-every 10 --window 1 --patience 1 --radius 0 "
      "--min-evals 1 --save-state " +
      (dir / "state.bin").string();
  const CmdResult r = run_cli(cmd, dir);
  CHECK(r.exit_code == 3);  // finished, but only via the fallback
  CHECK(fs::exists(dir / "out" / "denoised.png"));
  CHECK(fs::exists(dir / "out" / "trace.json"));
  CHECK(fs::exists(dir / "out" / "score_curve.csv"));
  CHECK(fs::exists(dir / "state.bin"));

  // Without --keep-all only the chosen snapshot remains.
  int snaps = 0;
  for (const auto& e : fs::directory_iterator(dir / "out" / "snapshots"))
    if (e.path().filename().string().rfind("snap_", 0) == 0) ++snaps;
  CHECK(snaps == 1);

  const pipeline::RunTraceDoc doc = pipeline::read_trace(dir / "out" / "trace.json");
  REQUIRE(doc.decision.has_value());
  CHECK(doc.decision->no_peak_declared);
  CHECK(doc.trace.final_choice == 10);
  CHECK(doc.effective_config.at("dip").at("max_iterations") == 10);
  CHECK(doc.meta.contains("created_at"));
}

TEST_CASE("saved states warm-start a compatible run and refuse a foreign one") {
  const fs::path dir = fresh_dir("dipstop-cli-warm");
  write_tiny_model(dir / "model.bin");
  write_noisy_png(dir / "noisy.png", 32);

  const std::string common =
      " -m " + (dir / "model.bin").string() + " " + std::string(kTinyDip) +
      "--max-iters 10 --eval-every 10 --window 1 --patience 1 --radius 0 "
      "--min-evals 1";
  CHECK(run_cli("denoise -i " + (dir / "noisy.png").string() + " -o " +
                    (dir / "cold").string() + common + " --save-state " +
                    (dir / "state.bin").string(),
                dir)
            .exit_code == 3);

  CHECK(run_cli("denoise -i " + (dir / "noisy.png").string() + " -o " +
                    (dir / "warm").string() + common + " --warm-start " +
                    (dir / "state.bin").string(),
                dir)
            .exit_code == 3);

  // A different architecture must reject the state instead of loading it.
  const CmdResult bad = run_cli(
      "denoise -i " + (dir / "noisy.png").string() + " -o " +
          (dir / "bad").string() + " -m " + (dir / "model.bin").string() +
          " --depth 1 --filters 12 --skip-filters 4 --input-channels 8 "
          "--max-iters 10 --eval-every 10 --window 1 --patience 1 --radius 0 "
          "--min-evals 1 --warm-start " +
          (dir / "state.bin").string(),
      dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("fingerprint") != std::string::npos);
}

TEST_CASE("backbone pretraining writes a loadable checkpoint") {
  const fs::path dir = fresh_dir("dipstop-cli-backbone");
  const CmdResult r = run_cli(
      "init-backbone -o " + (dir / "backbone.bin").string() +
          " --steps 1 --batch-size 2 --image-size 32 --stem 4 --blocks 6:2,8:2",
      dir);
  CHECK(r.exit_code == 0);
  const quality::BackboneCheckpoint c =
      quality::load_backbone(dir / "backbone.bin");
  CHECK(c.spec.stem_filters == 4);
  REQUIRE(c.spec.blocks.size() == 2);
  CHECK(c.spec.blocks[1].out_channels == 8);
  CHECK_FALSE(c.weights.empty());
}

TEST_CASE("evaluate needs clean references and reports usage errors early") {
  const fs::path dir = fresh_dir("dipstop-cli-eval-usage");
  write_tiny_model(dir / "model.bin");
  {
    std::ofstream out(dir / "pairs.jsonl");
    out << R"({"id":"a","noisy":"missing.png"})" << "\n";
  }
  const CmdResult r = run_cli("evaluate -p " + (dir / "pairs.jsonl").string() +
                                  " -m " + (dir / "model.bin").string() +
                                  " -o " + (dir / "out").string(),
                              dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

}  // TEST_SUITE("cli")

int main(int argc, char** argv) {
  std::vector<char*> doctest_args;
  doctest_args.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_dipstop.empty() && argv[i][0] != '-') {
      g_dipstop = argv[i];
      continue;
    }
    doctest_args.push_back(argv[i]);
  }
  if (g_dipstop.empty()) {
    std::fprintf(stderr, "usage: test_cli_process <path-to-dipstop> [doctest args]\n");
    return 1;
  }
  doctest::Context context(static_cast<int>(doctest_args.size()),
                           doctest_args.data());
  return context.run();
}
