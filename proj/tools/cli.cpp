#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "steerwork/bounds.hpp"
#include "steerwork/game.hpp"
#include "steerwork/lhs.hpp"
#include "steerwork/mub.hpp"

namespace steerwork::cli {

namespace {

// Raised for flag combinations that are syntactically valid but meaningless.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { kText, kJson, kCsv };

struct Common {
  std::size_t dim = 0;
  std::size_t n_bases = 0;
  double omega = 1.0;
  std::string beta_text = "1.0";
  double beta = 1.0;
  std::string format = "text";
  std::string out_path;
};

// ---------------------------------------------------------------------------
// Rendering

// Shortest representation that round-trips the double.
std::string full(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string text9(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

std::string csv_optional(const std::optional<double>& v) { return v ? full(*v) : ""; }

std::string text_optional(const std::optional<double>& v) {
  return v ? text9(*v) : "undefined (w_classical <= 0)";
}

Format parse_format(const std::string& f) {
  if (f == "json") return Format::kJson;
  if (f == "csv") return Format::kCsv;
  return Format::kText;
}

double parse_beta(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return kZeroTemperature;
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || std::isnan(value)) {
    throw UsageError("--beta: expected a non-negative number or 'inf', got '" + text + "'");
  }
  return value;
}

void check_energy(Common& c) {
  c.beta = parse_beta(c.beta_text);
  if (c.beta < 0.0) throw UsageError("--beta must be non-negative");
  if (!(c.omega > 0.0) || !std::isfinite(c.omega)) throw UsageError("--omega must be positive");
}

void check_dim(const Common& c) {
  if (c.dim < 2) throw UsageError("--dim must be at least 2");
}

void add_common(CLI::App* sub, Common& c, bool with_shape = true) {
  if (with_shape) {
    sub->add_option("--dim", c.dim, "Local Hilbert space dimension d")->required();
    sub->add_option("--n-bases", c.n_bases, "Number of mutually unbiased bases n")->required();
  }
  sub->add_option("--omega", c.omega, "Energy gap of the quench Hamiltonians")
      ->capture_default_str();
  sub->add_option("--beta", c.beta_text, "Inverse temperature; 'inf' for zero temperature")
      ->capture_default_str();
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", c.out_path, "Write output to this file instead of stdout");
}

// ---------------------------------------------------------------------------
// Subcommands. Each renders into `os` and returns the exit code.

int cmd_bounds(const Common& c, std::ostream& os) {
  const BoundSet b = compute_bounds(c.dim, c.n_bases, c.omega, c.beta);
  switch (parse_format(c.format)) {
    case Format::kJson:
      os << nlohmann::json(b).dump(2) << '\n';
      break;
    case Format::kCsv:
      os << "d,n,omega,beta,w_classical,w_quantum,xi,rastegin,advantage\n"
         << b.d << ',' << b.n << ',' << full(b.omega) << ',' << full(b.beta) << ','
         << full(b.w_classical) << ',' << full(b.w_quantum) << ',' << csv_optional(b.xi) << ','
         << full(b.rastegin) << ',' << (b.advantage ? "true" : "false") << '\n';
      break;
    case Format::kText:
      os << "d            " << b.d << '\n'
         << "n            " << b.n << '\n'
         << "omega        " << text9(b.omega) << '\n'
         << "beta         " << text9(b.beta) << '\n'
         << "w_classical  " << text9(b.w_classical) << '\n'
         << "w_quantum    " << text9(b.w_quantum) << '\n'
         << "xi           " << text_optional(b.xi) << '\n'
         << "rastegin     " << text9(b.rastegin) << '\n'
         << "advantage    " << (b.advantage ? "true" : "false") << '\n';
      break;
  }
  return b.xi ? kOk : kXiDomain;
}

int cmd_simulate(const Common& c, std::uint64_t shots, std::uint64_t seed, std::ostream& os) {
  const GameConfig config{c.dim, c.n_bases, c.omega, c.beta, shots, seed};
  if (!mub_supported(c.dim, c.n_bases)) {
    throw UnsupportedConstruction("MUB construction not available for d = " +
                                  std::to_string(c.dim) + ", n = " + std::to_string(c.n_bases) +
                                  "; supported families: " + mub_supported_families());
  }
  const WorkReport r = shots == 0 ? run_exact_quantum(config) : run_monte_carlo(config);
  switch (parse_format(c.format)) {
    case Format::kJson:
      os << nlohmann::json(r).dump(2) << '\n';
      break;
    case Format::kCsv:
      os << "d,n,omega,beta,mode,shots,seed,average,stderr,w_classical,w_quantum,xi\n"
         << r.d << ',' << r.n << ',' << full(r.omega) << ',' << full(r.beta) << ','
         << to_string(r.mode) << ',' << r.shots << ',' << r.seed << ',' << full(r.average) << ','
         << (r.mode == ReportMode::kMonteCarlo ? full(r.standard_error) : "") << ','
         << full(r.w_classical) << ',' << full(r.w_quantum) << ',' << csv_optional(r.xi) << '\n';
      break;
    case Format::kText:
      os << "mode         " << to_string(r.mode) << '\n'
         << "d            " << r.d << '\n'
         << "n            " << r.n << '\n'
         << "omega        " << text9(r.omega) << '\n'
         << "beta         " << text9(r.beta) << '\n';
      if (r.mode == ReportMode::kMonteCarlo) {
        os << "shots        " << r.shots << '\n' << "seed         " << r.seed << '\n';
      }
      os << "average      " << text9(r.average) << '\n';
      if (r.mode == ReportMode::kMonteCarlo) os << "stderr       " << text9(r.standard_error) << '\n';
      os << "w_classical  " << text9(r.w_classical) << '\n'
         << "w_quantum    " << text9(r.w_quantum) << '\n'
         << "xi           " << text_optional(r.xi) << '\n'
         << "per-round work W(x, a):\n";
      for (std::size_t x = 0; x < r.per_round.size(); ++x) {
        os << "  x=" << x << ':';
        for (double w : r.per_round[x]) os << ' ' << text9(w);
        os << '\n';
      }
      break;
  }
  return kOk;
}

int cmd_scan(const Common& c, const std::vector<std::size_t>& dims, std::ostream& os) {
  if (dims.empty()) throw UsageError("--dims: at least one dimension is required");
  for (std::size_t d : dims) {
    if (d < 2) throw UsageError("--dims: dimensions must be at least 2");
  }
  for (std::size_t d : dims) {
    if (!mub_supported(d, d + 1)) {
      throw UnsupportedConstruction("no d + 1 MUB construction for d = " + std::to_string(d) +
                                    "; supported families: " + mub_supported_families());
    }
  }
  bool all_defined = true;
  std::vector<BoundSet> rows;
  for (std::size_t d : dims) {
    rows.push_back(compute_bounds(d, d + 1, c.omega, c.beta));
    all_defined = all_defined && rows.back().xi.has_value();
  }
  auto ratio = [](const BoundSet& b) -> std::optional<double> {
    if (!b.xi) return std::nullopt;
    return *b.xi / std::sqrt(static_cast<double>(b.d));
  };

  switch (parse_format(c.format)) {
    case Format::kJson: {
      nlohmann::json arr = nlohmann::json::array();
      for (const BoundSet& b : rows) {
        nlohmann::json j = b;
        const auto r = ratio(b);
        j["xi_over_sqrt_d"] = r ? nlohmann::json(*r) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
      }
      os << arr.dump(2) << '\n';
      break;
    }
    case Format::kText:
      os << std::left << std::setw(5) << "d" << std::setw(5) << "n" << std::setw(17)
         << "w_classical" << std::setw(17) << "w_quantum" << std::setw(17) << "xi"
         << "xi/sqrt(d)\n";
      for (const BoundSet& b : rows) {
        const auto r = ratio(b);
        os << std::left << std::setw(5) << b.d << std::setw(5) << b.n << std::setw(17)
           << text9(b.w_classical) << std::setw(17) << text9(b.w_quantum) << std::setw(17)
           << (b.xi ? text9(*b.xi) : "undefined") << (r ? text9(*r) : "undefined") << '\n';
      }
      break;
    case Format::kCsv:
      os << "d,n,omega,beta,w_classical,w_quantum,xi,xi_over_sqrt_d\n";
      for (const BoundSet& b : rows) {
        os << b.d << ',' << b.n << ',' << full(b.omega) << ',' << full(b.beta) << ','
           << full(b.w_classical) << ',' << full(b.w_quantum) << ',' << csv_optional(b.xi) << ','
           << csv_optional(ratio(b)) << '\n';
      }
      break;
  }
  return all_defined ? kOk : kXiDomain;
}

struct LhsOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  std::size_t max_iter = 500;
  std::size_t resolution = 500;
};

int cmd_lhs_opt(const Common& c, const LhsOptions& o, std::ostream& os) {
  if (o.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (o.resolution < 2) throw UsageError("--resolution must be at least 2");
  const OptimizerSettings settings{o.restarts, o.tol, o.max_iter, o.seed};
  const LhsSupremum sup = lhs_sup_work(c.dim, c.n_bases, c.omega, c.beta, settings);
  const double ceiling = rastegin_bound(c.dim, c.n_bases);

  std::optional<OptimizerResult> oracle;
  if (c.dim == 2) oracle = bloch_grid_search(build_mub(c.dim, c.n_bases), o.resolution);
  const std::optional<double> agreement =
      oracle ? std::optional<double>(std::abs(oracle->objective - sup.optimizer.objective))
             : std::nullopt;

  switch (parse_format(c.format)) {
    case Format::kJson: {
      nlohmann::json j{{"d", c.dim},
                       {"n", c.n_bases},
                       {"omega", c.omega},
                       {"beta", std::isinf(c.beta) ? nlohmann::json("inf") : nlohmann::json(c.beta)},
                       {"optimizer", sup.optimizer},
                       {"response", sup.response},
                       {"achievable", sup.achievable},
                       {"w_classical", sup.bound},
                       {"gap", sup.gap},
                       {"rastegin", ceiling}};
      if (oracle) {
        j["oracle"] = {{"objective", oracle->objective}, {"agreement", *agreement}};
      } else {
        j["oracle"] = nullptr;
      }
      os << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      os << "d,n,omega,beta,objective,rastegin,achievable,w_classical,gap,converged,iterations,"
            "oracle_objective,oracle_agreement\n"
         << c.dim << ',' << c.n_bases << ',' << full(c.omega) << ',' << full(c.beta) << ','
         << full(sup.optimizer.objective) << ',' << full(ceiling) << ',' << full(sup.achievable)
         << ',' << full(sup.bound) << ',' << full(sup.gap) << ','
         << (sup.optimizer.converged ? "true" : "false") << ',' << sup.optimizer.iterations << ','
         << (oracle ? full(oracle->objective) : "") << ',' << csv_optional(agreement) << '\n';
      break;
    case Format::kText:
      os << "d            " << c.dim << '\n'
         << "n            " << c.n_bases << '\n'
         << "objective    " << text9(sup.optimizer.objective) << "  (rastegin ceiling "
         << text9(ceiling) << ")\n"
         << "achievable   " << text9(sup.achievable) << '\n'
         << "w_classical  " << text9(sup.bound) << '\n'
         << "gap          " << text9(sup.gap) << '\n'
         << "converged    " << (sup.optimizer.converged ? "true" : "false") << " after "
         << sup.optimizer.iterations << " iterations (restart " << sup.optimizer.best_restart
         << " of " << sup.optimizer.restarts_used << ")\n";
      if (oracle) {
        os << "bloch grid   " << text9(oracle->objective) << '\n'
           << "agreement    " << text9(*agreement) << '\n';
      }
      break;
  }
  return kOk;
}

int cmd_verify_mub(const Common& c, double tol, std::ostream& os) {
  const MubSet set = build_mub(c.dim, c.n_bases);
  const MubVerification r = verify_mub(set, tol);
  switch (parse_format(c.format)) {
    case Format::kJson: {
      nlohmann::json j = r;
      j["d"] = c.dim;
      j["n"] = c.n_bases;
      j["tol"] = tol;
      os << j.dump(2) << '\n';
      break;
    }
    case Format::kCsv:
      os << "d,n,tol,passed,worst_deviation,worst_branch,x,a,y,b\n"
         << c.dim << ',' << c.n_bases << ',' << full(tol) << ',' << (r.passed ? "true" : "false")
         << ',' << full(r.worst_deviation) << ',' << to_string(r.worst_branch) << ',' << r.x << ','
         << r.a << ',' << r.y << ',' << r.b << '\n';
      break;
    case Format::kText:
      os << (r.passed ? "PASS" : "FAIL") << "  d=" << c.dim << " n=" << c.n_bases
         << "  worst deviation " << text9(r.worst_deviation) << " (tol " << text9(tol) << ")\n";
      if (!r.passed) {
        os << "  offending pair: <phi_" << r.x << "^" << r.a << "|phi_" << r.y << "^" << r.b
           << "> (" << to_string(r.worst_branch) << ")\n";
      }
      break;
  }
  return r.passed ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Work extraction with steerable correlations: bounds, simulation and LHS checks",
               "steerwork"};
  app.require_subcommand(1);

  Common common;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;
  LhsOptions lhs;
  double mub_tol = 1e-10;

  CLI::App* bounds = app.add_subcommand("bounds", "Closed-form work bounds and advantage ratio");
  add_common(bounds, common);

  CLI::App* simulate = app.add_subcommand("simulate", "Play the steering protocol");
  add_common(simulate, common);
  simulate->add_option("--shots", shots, "Monte Carlo rounds; 0 for the exact average")
      ->capture_default_str();
  simulate->add_option("--seed", seed, "RNG seed")->capture_default_str();

  CLI::App* scan = app.add_subcommand("scan", "Bounds for a list of dimensions with n = d + 1");
  common.format = "csv";
  add_common(scan, common, false);
  scan->add_option("--dims", dims, "Comma-separated dimensions")->delimiter(',')->required();

  CLI::App* lhs_opt = app.add_subcommand("lhs-opt", "Numerical supremum over LHS strategies");
  add_common(lhs_opt, common);
  lhs_opt->add_option("--restarts", lhs.restarts, "Random restarts")->capture_default_str();
  lhs_opt->add_option("--seed", lhs.seed, "RNG seed")->capture_default_str();
  lhs_opt->add_option("--tol", lhs.tol, "Stop when the objective gain is below this")
      ->capture_default_str();
  lhs_opt->add_option("--max-iter", lhs.max_iter, "Iterations per restart")->capture_default_str();
  lhs_opt->add_option("--resolution", lhs.resolution, "Bloch grid resolution (d = 2 oracle)")
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify-mub", "Check the MUB overlap conditions");
  add_common(verify, common);
  verify->add_option("--tol", mub_tol, "Tolerance on overlap deviations")->capture_default_str();

  // The scan default differs; the others keep text unless --format is given.
  common.format = "text";

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::ostringstream rendered;
  int code = kOk;
  try {
    if (scan->parsed() && scan->count("--format") == 0) common.format = "csv";
    check_energy(common);
    if (!scan->parsed()) check_dim(common);

    if (bounds->parsed()) {
      if (common.n_bases < 1) throw UsageError("--n-bases must be at least 1");
      code = cmd_bounds(common, rendered);
    } else if (simulate->parsed()) {
      code = cmd_simulate(common, shots, seed, rendered);
    } else if (scan->parsed()) {
      code = cmd_scan(common, dims, rendered);
    } else if (lhs_opt->parsed()) {
      code = cmd_lhs_opt(common, lhs, rendered);
    } else if (verify->parsed()) {
      if (!(mub_tol >= 0.0)) throw UsageError("--tol must be non-negative");
      code = cmd_verify_mub(common, mub_tol, rendered);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedConstruction& e) {
    err << "error: " << e.what() << '\n';
    return kUnsupported;
  }

  if (code == kXiDomain) {
    err << "warning: advantage ratio is undefined because w_classical <= 0\n";
  }
  if (common.out_path.empty()) {
    out << rendered.str();
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open '" << common.out_path << "' for writing\n";
      return kUsage;
    }
    file << rendered.str();
  }
  return code;
}

}  // namespace steerwork::cli
