#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "wavefuse/app/scene.hpp"
#include "wavefuse/cluster.hpp"
#include "wavefuse/imageio.hpp"

using namespace wavefuse;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "wavefuse_cli_test";

struct Run {
  int status;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(WAVEFUSE_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, p) != nullptr) out += buf;
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string at(const char* name) { return (kDir / name).string(); }

// Writes pan.pgm and ms.ppm for a synthetic scene once per process.
void ensure_scene() {
  static bool done = false;
  if (done) return;
  fs::remove_all(kDir);
  fs::create_directories(kDir);
  const app::Scene s = app::synth_scene(64, 64, 3, 42);
  imageio::save_pnm(kDir / "pan.pgm", imageio::quantize(s.pan));
  imageio::save_pnm(kDir / "ms.ppm",
                    imageio::quantize_rgb(s.ms.band(0), s.ms.band(1), s.ms.band(2)));
  imageio::save_pnm(kDir / "gray.pgm", imageio::quantize(s.ms.band(0)));
  done = true;
}

// A `wavefuse worker` child process on an ephemeral port.
class WorkerProcess {
 public:
  WorkerProcess() {
    pipe_ = popen((std::string(WAVEFUSE_CLI) + " worker --listen 127.0.0.1:0").c_str(), "r");
    REQUIRE(pipe_ != nullptr);
    char line[256];
    REQUIRE(std::fgets(line, sizeof line, pipe_) != nullptr);
    std::string s(line);
    REQUIRE(s.rfind("listening ", 0) == 0);
    endpoint_ = s.substr(10, s.find_last_not_of("\r\n") - 9);
  }
  ~WorkerProcess() {
    if (pipe_ != nullptr) stop();
  }
  const std::string& endpoint() const { return endpoint_; }
  int stop() {
    cluster::send_shutdown(endpoint_);
    const int raw = pclose(pipe_);
    pipe_ = nullptr;
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }

 private:
  FILE* pipe_ = nullptr;
  std::string endpoint_;
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").status == 1);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("fuse --pan a.pgm").status == 1);
  ensure_scene();
  CHECK(run("fuse --pan " + at("pan.pgm") + " --ms " + at("ms.ppm") + " --method pca --out x.ppm")
            .status == 1);
  CHECK(run("fuse --pan " + at("pan.pgm") + " --ms " + at("ms.ppm") + " --grid 2by2 --out x.ppm")
            .status == 1);
  CHECK(run("fuse --pan " + at("pan.pgm") + " --ms " + at("ms.ppm") +
            " --workers 2 --nodes 127.0.0.1:9 --out x.ppm")
            .status == 1);
  CHECK(run("--help").status == 0);
}

TEST_CASE("I/O errors exit with 2") {
  ensure_scene();
  const Run r =
      run("fuse --pan " + at("nope.pgm") + " --ms " + at("ms.ppm") + " --out " + at("o.ppm"));
  CHECK(r.status == 2);
  CHECK(r.output.find("Io") != std::string::npos);
  std::ofstream(kDir / "bad.pgm") << "P2\n1 1\n255\n0\n";
  CHECK(run("fuse --pan " + at("bad.pgm") + " --ms " + at("ms.ppm") + " --out " + at("o.ppm"))
            .status == 2);
}

TEST_CASE("computation errors exit with 3") {
  ensure_scene();
  const Run r = run("fuse --method ihs --pan " + at("pan.pgm") + " --ms " + at("gray.pgm") +
                    " --out " + at("o.pgm"));
  CHECK(r.status == 3);
  CHECK(r.output.find("IHS requires 3 bands") != std::string::npos);
  CHECK(run("metrics " + at("pan.pgm") + " --ms " + at("ms.ppm") + " --pan " + at("pan.pgm"))
            .status == 3);
}

TEST_CASE("fuse and metrics end to end") {
  ensure_scene();
  for (const char* m : {"wa", "ihs", "hdwt", "ddwt"}) {
    const std::string out = at((std::string("f_") + m + ".ppm").c_str());
    REQUIRE(run(std::string("fuse --method ") + m + " --grid 2x2 --workers 2 --pan " +
                at("pan.pgm") + " --ms " + at("ms.ppm") + " --out " + out)
                .status == 0);
    const std::string again = at((std::string("g_") + m + ".ppm").c_str());
    REQUIRE(run(std::string("fuse --method ") + m + " --grid 2x2 --workers 2 --pan " +
                at("pan.pgm") + " --ms " + at("ms.ppm") + " --out " + again)
                .status == 0);
    CHECK(slurp(out) == slurp(again));
  }
  const Run r = run("metrics " + at("f_hdwt.ppm") + " --ms " + at("ms.ppm") + " --pan " +
                    at("pan.pgm") + " --ratio 2 --out " + at("m.json"));
  REQUIRE(r.status == 0);
  for (const char* key : {"ergas=", "q_band_0=", "q_band_2=", "d_lambda=", "d_s=", "qnr="}) {
    CHECK(r.output.find(key) != std::string::npos);
  }
  CHECK(fs::exists(kDir / "m.json"));
}

TEST_CASE("bench prints its tables") {
  const Run r = run("bench --size 64x64 --method hdwt,wa --grid 1x1,2x2 --workers 1,2 --reps 1");
  REQUIRE(r.status == 0);
  CHECK(r.output.find("PAN width, px  PAN height, px") != std::string::npos);
  CHECK(r.output.find("speedup") != std::string::npos);
  CHECK(run("bench --size 2x2 --reps 1").status == 1);
}

TEST_CASE("worker lifecycle") {
  CHECK(run("worker --listen nonsense").status != 0);
  CHECK(run("worker --listen 256.1.1.1:80").status != 0);

  WorkerProcess w;
  CHECK(w.stop() == 0);
}

TEST_CASE("a worker process serves two masters in a row") {
  ensure_scene();
  WorkerProcess a, b;
  const std::string nodes = a.endpoint() + "," + b.endpoint();
  const std::string base =
      "fuse --method hdwt --grid 2x2 --pan " + at("pan.pgm") + " --ms " + at("ms.ppm");
  REQUIRE(run(base + " --nodes " + nodes + " --out " + at("d1.ppm")).status == 0);
  REQUIRE(run(base + " --nodes " + a.endpoint() + " --out " + at("d2.ppm")).status == 0);
  REQUIRE(run(base + " --workers 1 --out " + at("local.ppm")).status == 0);
  CHECK(slurp(kDir / "d1.ppm") == slurp(kDir / "d2.ppm"));
  CHECK(slurp(kDir / "d1.ppm") == slurp(kDir / "local.ppm"));
  CHECK(a.stop() == 0);
  CHECK(b.stop() == 0);
}
