#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "holospec/cli/job.hpp"

using namespace holospec;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holospec: spectra of Brieskorn lattices and rescaled harmonic data"};
  app.require_subcommand(1);

  std::string input, out, tau_grid, gammas_text;
  std::size_t fourier = 0;
  bool complex_grid = false;
  std::vector<std::string> gammas;

  auto* spectral = app.add_subcommand("spectral", "SP^inf, SP^0, Susy, nu and mu tables, U");
  auto* scan = app.add_subcommand("scan", "Susy trajectory over a tau grid, as CSV");
  auto* verify = app.add_subcommand("verify", "tau -> 0 and tau -> inf limits plus the invariant suite");
  auto* deligne = app.add_subcommand("deligne", "F_Del lattices at the given gammas");
  for (auto* s : {spectral, scan, verify, deligne}) {
    s->add_option("input", input, "job file (JSON)")->required();
    s->add_option("--out", out, "output path, stdout by default");
    s->add_option("--fourier", fourier, "Fourier order, overrides the job");
  }
  scan->add_option("--tau-grid", tau_grid, "log:lo:hi:n, lin:lo:hi:n, list:a,b,... or circle:r:n");
  scan->add_flag("--complex", complex_grid, "allow complex tau");
  deligne->add_option("--gamma", gammas, "p/q, repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json j;
    try {
      j = json::parse(read_file(input));
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    JobSpec job = parse_job(j);
    if (fourier != 0) {
      job.numeric.fourier_order = fourier;
      job.numeric.limits.fourier_order = fourier;
      if (fourier < 8 || fourier > 4096 || (fourier & (fourier - 1)) != 0)
        throw ParseError("--fourier must be a power of two in [8, 4096]");
    }
    if (!tau_grid.empty()) job.numeric.tau_grid = tau_grid;
    if (complex_grid) job.numeric.allow_complex = true;
    for (const auto& g : gammas) {
      try {
        job.gammas.push_back(parse_rational(g));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
      }
    }

    if (*spectral) {
      emit(out, run_spectral(job).dump(2) + "\n");
    } else if (*scan) {
      // grid problems are parse errors and must surface before any numerics
      parse_tau_grid(job.numeric.tau_grid, job.numeric.allow_complex);
      std::ostringstream csv;
      write_scan_csv(csv, run_scan(job));
      emit(out, csv.str());
    } else if (*verify) {
      bool pass = false;
      const json r = run_verify(job, pass);
      emit(out, r.dump(2) + "\n");
      std::cerr << (pass ? "verify: pass\n" : "verify: FAIL\n");
      return pass ? 0 : 1;
    } else if (*deligne) {
      emit(out, run_deligne(job).dump(2) + "\n");
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInput& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
