#include "dprime/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dprime/error.hpp"
#include "dprime/limit_ops.hpp"
#include "dprime/resonance.hpp"
#include "dprime/spec_io.hpp"
#include "dprime/table.hpp"

namespace dprime {

namespace {

struct Common {
  std::string potential_path;
  std::string format = "csv";
  std::string out_path;
  double tol = JostOptions{}.tol;
  double quad_tol = kDefaultQuadTol;
  double rtol = OdeOptions{}.rtol;
  std::string method = "auto";
};

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw SpecError("not a number: \"" + std::string(s) + "\"");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(parse_double(std::string_view(s).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

cplx parse_k(const std::string& s) {
  const auto parts = parse_list(s);
  if (parts.size() > 2) throw SpecError("k must be RE or RE,IM: \"" + s + "\"");
  const cplx k(parts[0], parts.size() == 2 ? parts[1] : 0.0);
  if (k.imag() < 0.0) throw SpecError("k must satisfy Im k >= 0: \"" + s + "\"");
  return k;
}

Potential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open potential spec \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_potential_spec(buf.str());
}

JostOptions jost_options(const Common& c) {
  JostOptions o;
  o.tol = c.tol;
  o.quad_tol = c.quad_tol;
  o.ode.rtol = c.rtol;
  if (c.method == "rk")
    o.method = Method::runge_kutta;
  else if (c.method == "transfer")
    o.method = Method::transfer_matrix;
  return o;
}

void emit(const Common& c, const std::vector<Table>& tables, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (c.format == "json")
      write_json(os, tables);
    else
      write_csv(os, tables);
  };
  if (c.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw SpecError("cannot open output file \"" + c.out_path + "\"");
  write(f);
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--potential", c.potential_path, "Potential spec (JSON)")->required();
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out_path, "Output file (default: standard output)");
  cmd->add_option("--tol", c.tol, "Tail tolerance at the Jost anchor")->capture_default_str();
  cmd->add_option("--quad-tol", c.quad_tol, "Absolute quadrature tolerance")
      ->capture_default_str();
  cmd->add_option("--rtol", c.rtol, "Relative tolerance of the ODE integrator")
      ->capture_default_str();
  cmd->add_option("--method", c.method,
                  "auto: exact steps for piecewise-constant V, rk: always integrate, "
                  "transfer: exact steps only")
      ->check(CLI::IsMember({"auto", "rk", "transfer"}))
      ->capture_default_str();
}

void push_complex(std::vector<Cell>& row, cplx z) {
  row.emplace_back(z.real());
  row.emplace_back(z.imag());
}

Table scatter_table(const Potential& p, const std::vector<cplx>& ks, const JostOptions& o) {
  Table t{"scatter",
          {"k_re", "k_im", "a_re", "a_im", "b_re", "b_im", "r_re", "r_im", "t_re", "t_im",
           "unitarity_defect"},
          {}};
  for (cplx k : ks) {
    const auto s = scattering(p, k, o);
    std::vector<Cell> row;
    for (cplx z : {k, s.a, s.b, s.r, s.t}) push_complex(row, z);
    row.emplace_back(std::abs(std::norm(s.r) + std::norm(s.t) - 1.0));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jost solutions, zero-energy resonances and scaled-potential limits"};
  app.require_subcommand(1);

  Common scatter_c;
  std::string k_single;
  std::string k_list;
  auto* scatter = app.add_subcommand("scatter", "Scattering coefficients a, b, r, t");
  add_common(scatter, scatter_c);
  scatter->add_option("--k", k_single, "Wave number RE,IM");
  scatter->add_option("--k-list", k_list, "Semicolon-separated wave numbers RE,IM;RE,IM;...");

  auto* resonance = app.add_subcommand("resonance", "Zero-energy resonance diagnostics");
  resonance->require_subcommand(1);

  Common sweep_c;
  double alpha_min = 0.0, alpha_max = 0.0;
  int grid_n = 0;
  double root_tol = 1e-10;
  auto* sweep = resonance->add_subcommand("sweep", "Resonant couplings alpha of alpha V");
  add_common(sweep, sweep_c);
  sweep->add_option("--alpha-min", alpha_min, "Lower end (excluded)")->required();
  sweep->add_option("--alpha-max", alpha_max, "Upper end (included)")->required();
  sweep->add_option("--grid", grid_n, "Number of grid cells")->required()->check(
      CLI::PositiveNumber);
  sweep->add_option("--root-tol", root_tol, "Bisection tolerance")->capture_default_str();

  Common theta_c;
  double threshold = 0.0;
  double delta = 1e-4;
  auto* theta = resonance->add_subcommand("theta", "D(0), theta and the derivative of D at 0");
  add_common(theta, theta_c);
  theta->add_option("--threshold", threshold,
                    "Resonance threshold on |D(0)|; 0 selects 1e-8 (1 + FM norm)")
      ->capture_default_str();
  theta->add_option("--delta", delta, "Difference step for the derivative of D")
      ->capture_default_str();

  Common conv_c;
  std::string conv_k;
  std::string eps_text;
  double box = 10.0;
  int n = 200;
  double conv_threshold = 0.0;
  double alpha_weight = kDefaultAlphaWeight;
  auto* converge = app.add_subcommand("converge", "Truncated scaled operators against the limit");
  add_common(converge, conv_c);
  converge->add_option("--k", conv_k, "Wave number RE,IM")->required();
  converge->add_option("--eps", eps_text, "Scales E1,E2,... (descending)")->required();
  converge->add_option("--box", box, "Kernel lattice half-width")->capture_default_str();
  converge->add_option("--n", n, "Kernel lattice points per axis")->capture_default_str();
  converge->add_option("--threshold", conv_threshold,
                       "Resonance threshold on |D(0)|; 0 selects 1e-8 (1 + FM norm)")
      ->capture_default_str();
  converge->add_option("--alpha-weight", alpha_weight,
                       "Exponent of the tail in the splitting weight (infinite support)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    app.exit(CLI::CallForHelp(), out, err);
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    app.exit(CLI::CallForAllHelp(), out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (scatter->parsed()) {
      std::vector<cplx> ks;
      if (!k_single.empty()) ks.push_back(parse_k(k_single));
      if (!k_list.empty()) {
        std::size_t start = 0;
        while (true) {
          const auto pos = k_list.find(';', start);
          ks.push_back(parse_k(k_list.substr(start, pos - start)));
          if (pos == std::string::npos) break;
          start = pos + 1;
        }
      }
      if (ks.empty()) throw SpecError("scatter needs --k or --k-list");
      const auto p = load_potential(scatter_c.potential_path);
      emit(scatter_c, {scatter_table(p, ks, jost_options(scatter_c))}, out);
    } else if (sweep->parsed()) {
      const auto p = load_potential(sweep_c.potential_path);
      const auto s =
          resonant_couplings(p, alpha_min, alpha_max, grid_n, root_tol, jost_options(sweep_c));
      for (const auto& w : s.warnings) err << "warning: " << w << '\n';
      Table grid{"sweep", {"alpha", "d0"}, {}};
      for (std::size_t i = 0; i < s.alphas.size(); ++i)
        grid.rows.push_back({s.alphas[i], s.d0[i]});
      Table roots{"roots", {"alpha", "bracket_lo", "bracket_hi", "residual", "trivial"}, {}};
      for (const auto& r : s.roots)
        roots.rows.push_back(
            {r.alpha, r.bracket_lo, r.bracket_hi, r.residual, r.trivial ? 1.0 : 0.0});
      emit(sweep_c, {grid, roots}, out);
    } else if (theta->parsed()) {
      const auto p = load_potential(theta_c.potential_path);
      const auto o = jost_options(theta_c);
      const auto rep = resonance_report(p, threshold, o);
      Table t{"theta",
              {"d0", "threshold", "resonant", "theta", "theta_far", "ddot_re", "ddot_im",
               "ddot_gap"},
              {}};
      const double nan = std::numeric_limits<double>::quiet_NaN();
      std::vector<Cell> row{rep.d0, rep.threshold, rep.is_resonant ? 1.0 : 0.0,
                            rep.theta.value_or(nan), rep.theta_far.value_or(nan)};
      if (rep.is_resonant) {
        const auto dd = d_dot_zero(p, delta, o);
        push_complex(row, dd.estimate);
        row.emplace_back(dd.gap);
      } else {
        row.insert(row.end(), {nan, nan, nan});
      }
      t.rows.push_back(std::move(row));
      emit(theta_c, {t}, out);
    } else if (converge->parsed()) {
      const cplx k = parse_k(conv_k);
      const auto eps = parse_list(eps_text);
      for (double e : eps)
        if (!(e > 0.0)) throw SpecError("eps values must be positive");
      if (!std::is_sorted(eps.begin(), eps.end(), std::greater<>()))
        throw SpecError("eps values must be sorted in descending order");
      const auto p = load_potential(conv_c.potential_path);
      const auto recs = convergence_table(p, k, eps, box, n, jost_options(conv_c),
                                          conv_threshold, alpha_weight);
      Table t{"converge",
              {"eps", "r_re", "r_im", "t_re", "t_im", "kernel_distance", "limit_r_re",
               "limit_r_im", "limit_t_re", "limit_t_im", "classification"},
              {}};
      for (const auto& r : recs) {
        std::vector<Cell> row{r.eps};
        push_complex(row, r.r_eps);
        push_complex(row, r.t_eps);
        row.emplace_back(r.kernel_distance);
        push_complex(row, r.limit_r);
        push_complex(row, r.limit_t);
        row.emplace_back(r.limit.name());
        t.rows.push_back(std::move(row));
      }
      emit(conv_c, {t}, out);
    }
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace dprime
