// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pwz Authors

#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process; tools/pwz.cpp only forwards main() here.
//
// Exit codes: 0 success, 1 I/O or malformed input file, 2 usage,
// 3 degenerate input (search refused).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwz/pwz.hpp"

namespace pwz::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kUsage = 2, kDegenerate = 3 };

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Signal load_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "' for reading");
  try {
    return read_signal_csv(in);
  } catch (const ParseError& e) {
    throw IoFailure(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoFailure(path + ": " + e.what());
  }
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoFailure("failed writing '" + path + "'");
}

inline void require_distinct(const std::vector<std::string>& paths) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (paths[i].empty() || paths[j].empty()) continue;
      if (std::filesystem::weakly_canonical(paths[i]) == std::filesystem::weakly_canonical(paths[j])) {
        throw std::invalid_argument("paths must differ: '" + paths[i] + "' is used twice");
      }
    }
  }
}

struct Budget {
  double fraction = 0.1;
  std::optional<std::size_t> absolute;

  std::size_t resolve(std::size_t n) const {
    if (absolute) {
      if (*absolute < 1 || *absolute > n) {
        throw std::invalid_argument("--budget must lie in [1, " + std::to_string(n) + "]");
      }
      return *absolute;
    }
    return budget_from_fraction(fraction, n);
  }
};

inline void add_budget_options(CLI::App& cmd, Budget& budget) {
  auto* frac = cmd.add_option("--budget-frac", budget.fraction, "fraction of coefficients kept (default 0.1)");
  auto* abs = cmd.add_option("--budget", budget.absolute, "absolute number of coefficients kept");
  frac->excludes(abs);
}

inline void print_kv(std::ostream& out, const char* key, double value) {
  out << key << '=' << format_significant(value, 12) << '\n';
}

}  // namespace detail

struct SignalArgs {
  std::string name;
  std::size_t n = 1024;
  std::string out;
};

inline int cmd_signal(const SignalArgs& args, std::ostream& out) {
  Signal s = [&] {
    if (args.name == "doppler") return make_doppler(args.n);
    if (args.name == "bumps") return make_bumps(args.n);
    throw std::invalid_argument("unknown signal '" + args.name + "' (expected doppler or bumps)");
  }();
  detail::write_file(args.out, [&](std::ostream& os) { write_signal_csv(s, os); });
  out << "wrote " << s.size() << " samples to " << args.out << '\n';
  return kOk;
}

struct CompressArgs {
  std::string in;
  detail::Budget budget;
  std::optional<std::string> region;
  std::optional<double> kappa;
  std::string out;
  std::optional<std::string> recon;
};

inline int cmd_compress(const CompressArgs& args, std::ostream& out) {
  detail::require_distinct({args.in, args.out, args.recon.value_or("")});
  if (args.region.has_value() != args.kappa.has_value()) {
    throw std::invalid_argument("--region and --kappa must be given together");
  }
  const Signal signal = detail::load_signal(args.in);
  const std::size_t budget = args.budget.resolve(signal.size());
  const Compressor compressor(signal);

  SparseRepresentation rep;
  std::vector<double> approx;
  if (args.region) {
    const Region region = parse_region(*args.region);
    auto result = compressor.region(region, *args.kappa, budget);
    out << "K=" << budget << '\n';
    out << "n_J=" << result.report.n_J << "\nn_L=" << result.report.n_L << '\n';
    out << "k_J=" << result.report.k_J << "\nk_L=" << result.report.k_L << '\n';
    detail::print_kv(out, "sigma2_B", result.report.sigma2_B);
    detail::print_kv(out, "sigma2_Bc", result.report.sigma2_Bc);
    if (result.report.kappa_hat) {
      detail::print_kv(out, "kappa_hat", *result.report.kappa_hat);
    } else {
      out << "kappa_hat=undefined\n";
    }
    detail::print_kv(out, "mse", result.report.mse);
    rep = std::move(result.representation);
    approx = std::move(result.approximation);
  } else {
    rep = compressor.baseline(budget);
    approx = reconstruct(rep).vector();
    const auto report = error_report(signal.values(), approx, Region{});
    out << "K=" << budget << '\n';
    detail::print_kv(out, "mse", report.mse);
  }
  detail::write_file(args.out, [&](std::ostream& os) { save_sparse(rep, os); });
  if (args.recon) {
    const Signal recon(std::move(approx));
    detail::write_file(*args.recon, [&](std::ostream& os) { write_signal_csv(recon, os); });
  }
  return kOk;
}

struct ImportanceArgs {
  std::string in;
  std::string analysis;
  std::optional<std::string> out;
};

inline int cmd_importance(const ImportanceArgs& args, std::ostream& out) {
  detail::require_distinct({args.in, args.out.value_or("")});
  const auto analysis = parse_analysis(args.analysis);
  const Signal signal = detail::load_signal(args.in);
  const auto imp = importance(analysis, signal);
  auto emit = [&](std::ostream& os) {
    os << "t,importance\n";
    for (std::size_t t = 0; t < imp.size(); ++t) os << (t + 1) << ',' << format_exact(imp[t]) << '\n';
  };
  if (args.out) {
    detail::write_file(*args.out, emit);
  } else {
    emit(out);
  }
  return kOk;
}

struct SearchArgs {
  std::string in;
  std::string analysis;
  double kappa = 0.1;
  detail::Budget budget;
  std::string out;
  std::optional<double> top;
  std::optional<std::string> plot;
  unsigned threads = 0;
};

inline int cmd_search(const SearchArgs& args, std::ostream& out) {
  detail::require_distinct({args.in, args.out, args.plot.value_or("")});
  if (args.top && !(*args.top > 0.0 && *args.top <= 1.0)) throw std::invalid_argument("--top must lie in (0, 1]");
  const auto analysis = parse_analysis(args.analysis);
  const Signal signal = detail::load_signal(args.in);
  const std::size_t budget = args.budget.resolve(signal.size());

  const auto run = run_search(signal, analysis, args.kappa, budget, SearchOptions{args.threads});
  const auto shown = args.top ? top_fraction(run, *args.top) : run.results;
  detail::write_file(args.out, [&](std::ostream& os) { write_results_csv(os, shown); });

  const auto& best = run.results.front();
  out << "candidates=" << run.results.size() << '\n';
  out << "K=" << budget << '\n';
  detail::print_kv(out, "se0", run.se0);
  out << "best=" << best.interval.first << ':' << best.interval.last << '\n';
  detail::print_kv(out, "best_relSE", best.relse);
  out << "rows_written=" << shown.size() << '\n';

  if (args.plot) {
    const auto best_fit = Compressor(signal).region(Region({best.interval}), args.kappa, budget);
    const auto imp = importance(analysis, signal);
    const auto overlay = top_fraction(run, args.top.value_or(0.02));
    detail::write_file(*args.plot, [&](std::ostream& os) {
      svg::write_search_plot(os, signal.values(), best_fit.approximation, imp.values, overlay);
    });
  }
  return kOk;
}

/// Parses and runs one command line. All output goes to `out` and `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pwz: prioritized Haar wavelet compression"};
  app.require_subcommand(1);

  SignalArgs signal_args;
  auto* signal_cmd = app.add_subcommand("signal", "write a test signal as CSV");
  signal_cmd->add_option("--name", signal_args.name, "doppler | bumps")->required();
  signal_cmd->add_option("--n", signal_args.n, "number of samples (default 1024)");
  signal_cmd->add_option("--out", signal_args.out, "output CSV path")->required();

  CompressArgs compress_args;
  auto* compress_cmd = app.add_subcommand("compress", "budgeted thresholding, optionally region-prioritised");
  compress_cmd->add_option("--in", compress_args.in, "input signal CSV")->required();
  detail::add_budget_options(*compress_cmd, compress_args.budget);
  compress_cmd->add_option("--region", compress_args.region, "priority region a:b[,c:d...] (1-based)");
  compress_cmd->add_option("--kappa", compress_args.kappa, "requested error ratio in (0, 1]");
  compress_cmd->add_option("--out", compress_args.out, "output pwz-v1 file")->required();
  compress_cmd->add_option("--recon", compress_args.recon, "optional reconstruction CSV");

  ImportanceArgs importance_args;
  auto* importance_cmd = app.add_subcommand("importance", "write diag(J'J) as t,importance CSV");
  importance_cmd->add_option("--in", importance_args.in, "input signal CSV")->required();
  importance_cmd->add_option("--analysis", importance_args.analysis, "analysis selector")->required();
  importance_cmd->add_option("--out", importance_args.out, "output CSV (default: standard output)");

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "rank candidate priority intervals by relSE");
  search_cmd->add_option("--in", search_args.in, "input signal CSV")->required();
  search_cmd->add_option("--analysis", search_args.analysis, "analysis selector")->required();
  search_cmd->add_option("--kappa", search_args.kappa, "requested error ratio in (0, 1] (default 0.1)");
  detail::add_budget_options(*search_cmd, search_args.budget);
  search_cmd->add_option("--out", search_args.out, "results CSV")->required();
  search_cmd->add_option("--top", search_args.top, "keep only the best fraction p of rows");
  search_cmd->add_option("--plot", search_args.plot, "optional SVG overview");
  search_cmd->add_option("--threads", search_args.threads, "worker threads (default: all cores)");

  std::vector<const char*> cargs;
  cargs.reserve(argv.size() + 1);
  cargs.push_back("pwz");
  for (const auto& a : argv) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*signal_cmd) return cmd_signal(signal_args, out);
    if (*compress_cmd) return cmd_compress(compress_args, out);
    if (*importance_cmd) return cmd_importance(importance_args, out);
    if (*search_cmd) return cmd_search(search_args, out);
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace pwz::cli
