#include "splinets/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "splinets/construct.hpp"
#include "splinets/core.hpp"
#include "splinets/error.hpp"
#include "splinets/io.hpp"
#include "splinets/random.hpp"

namespace splinets {

namespace {

struct KnotOptions {
  std::vector<double> equid;
  std::string file;

  void add(CLI::App* cmd, bool required) {
    auto* e = cmd->add_option("--equid", equid, "a b n: n internal knots equally spaced on [a, b]")->expected(3);
    auto* f = cmd->add_option("--knots", file, "file with knot values")->check(CLI::ExistingFile);
    e->excludes(f);
    if (required) cmd->require_option(1, 0);
  }

  bool given() const { return !equid.empty() || !file.empty(); }

  KnotSet get() const {
    if (!equid.empty()) {
      const double n = equid[2];
      if (n < 0 || n != static_cast<int>(n)) throw CLI::ValidationError("--equid", "n must be a non-negative integer");
      return KnotSet::equidistant(equid[0], equid[1], static_cast<int>(n));
    }
    if (file.empty()) throw CLI::ValidationError("knots", "one of --equid or --knots is required");
    std::ifstream in(file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (char& ch : text)
      if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream ss(text);
    std::vector<double> xi;
    for (double v; ss >> v;) xi.push_back(v);
    return KnotSet(std::move(xi));
  }
};

BasisType parse_type(const std::string& s) {
  if (s == "spnt" || s == "dspnt") return BasisType::spnt;
  return basis_type_from_string(s);
}

Covariance read_covariance(const std::string& file, double scale, int dim) {
  if (file.empty()) return Covariance::identity(scale * scale);
  const CsvTable t = read_csv(file);
  if (t.values.rows() == dim && t.values.cols() == dim) return Covariance::matrix(t.values * scale * scale);
  if (t.values.size() == dim) {
    Vector d = Eigen::Map<const Vector>(t.values.data(), dim);
    return Covariance::diag(d * scale * scale);
  }
  throw DomainError("covariance file " + file + " must hold " + std::to_string(dim) + " values or a square matrix");
}

std::string validity_line(const MemberValidity& m, int index) {
  std::ostringstream s;
  s << "member " << index << ": " << (m.valid ? "valid" : "INVALID") << " max_violation=" << format_double(m.max_violation);
  if (!m.valid) {
    const char* kind = m.kind == Violation::taylor ? "taylor" : m.kind == Violation::boundary ? "boundary" : "convention";
    s << " kind=" << kind << " knot=" << m.knot;
  }
  return s.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Splines as derivative matrices: bases, projection, FPCA"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // basis
  auto* basis = app.add_subcommand("basis", "B-spline and orthonormal bases");
  KnotOptions basis_knots;
  basis_knots.add(basis, true);
  int basis_k = 3;
  std::string basis_type = "spnt";
  bool basis_norm = false;
  std::string basis_out;
  basis->add_option("-k,--order", basis_k, "order")->check(CLI::NonNegativeNumber);
  basis->add_option("--type", basis_type, "spnt | dspnt | gsob | twob | bs");
  basis->add_flag("--normalize", basis_norm, "normalize the B-splines");
  basis->add_option("-o,--out", basis_out, "output prefix (writes <prefix>.bs.json, <prefix>.os.json)")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "sample a family on the plot grid");
  std::string eval_in, eval_out;
  int eval_n = 10, eval_d = 0;
  eval->add_option("-i,--in", eval_in, "archive")->required()->check(CLI::ExistingFile);
  eval->add_option("-N,--density", eval_n, "points per interval per order")->check(CLI::PositiveNumber);
  eval->add_option("-d,--deriv", eval_d, "derivative order")->check(CLI::NonNegativeNumber);
  eval->add_option("-o,--out", eval_out, "CSV output (arg,member,value)")->required();

  // check
  auto* check = app.add_subcommand("check", "validity report");
  std::string check_in;
  check->add_option("-i,--in", check_in, "archive")->required()->check(CLI::ExistingFile);

  // random
  auto* random = app.add_subcommand("random", "random splines around a mean");
  std::string rnd_in, rnd_out, rnd_method = "rrm", rnd_sigma, rnd_theta;
  int rnd_count = 10;
  std::uint64_t rnd_seed = 0;
  double rnd_sigma_scale = 1.0, rnd_theta_scale = 1.0;
  random->add_option("-i,--in", rnd_in, "archive; its first member is the mean")->required()->check(CLI::ExistingFile);
  random->add_option("-n,--count", rnd_count, "number of draws")->check(CLI::PositiveNumber);
  random->add_option("--method", rnd_method, "rrm | crlc | crfc");
  random->add_option("--seed", rnd_seed, "random seed");
  random->add_option("--sigma", rnd_sigma, "row covariance: CSV with n+2 variances or a square matrix")->check(CLI::ExistingFile);
  random->add_option("--theta", rnd_theta, "column covariance: CSV with k+1 variances or a square matrix")->check(CLI::ExistingFile);
  random->add_option("--sigma-scale", rnd_sigma_scale, "standard deviation multiplier for rows");
  random->add_option("--theta-scale", rnd_theta_scale, "standard deviation multiplier for columns");
  random->add_option("-o,--out", rnd_out, "output archive")->required();

  // project
  auto* project = app.add_subcommand("project", "projection onto a spline space");
  KnotOptions proj_knots;
  proj_knots.add(project, false);
  std::string proj_csv, proj_in, proj_type = "spnt", proj_out;
  int proj_k = -1;
  auto* csv_opt = project->add_option("--csv", proj_csv, "functional data CSV")->check(CLI::ExistingFile);
  auto* in_opt = project->add_option("-i,--in", proj_in, "spline archive")->check(CLI::ExistingFile);
  csv_opt->excludes(in_opt);
  project->add_option("-k,--order", proj_k, "order (required for CSV input)");
  project->add_option("--type", proj_type, "spnt | gsob | twob | bs");
  project->add_option("-o,--out", proj_out, "output prefix (.coeff.csv, .proj.json, .basis.json)")->required();

  // fpca
  auto* fp = app.add_subcommand("fpca", "functional PCA of projection coefficients");
  std::string fp_coeff, fp_basis, fp_out;
  fp->add_option("--coeff", fp_coeff, "coefficients CSV")->required()->check(CLI::ExistingFile);
  fp->add_option("--basis", fp_basis, "orthonormal basis archive")->required()->check(CLI::ExistingFile);
  fp->add_option("-o,--out", fp_out, "output prefix (.eigenvalues.csv, .eigenfunctions.json, .scores.csv)")->required();

  // gram
  auto* gram = app.add_subcommand("gram", "Gram matrix of one or two families");
  std::string gram_a, gram_b, gram_out;
  gram->add_option("-i,--in", gram_a, "archive")->required()->check(CLI::ExistingFile);
  gram->add_option("-j,--with", gram_b, "second archive")->check(CLI::ExistingFile);
  gram->add_option("-o,--out", gram_out, "CSV output")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*basis) {
      const KnotSet knots = basis_knots.get();
      const BasisType type = parse_type(basis_type);
      SplinetOptions opt;
      opt.normalize = basis_norm;
      const SplinetResult so = splinet(knots, basis_k, type, opt);
      write_archive(basis_out + ".bs.json", {so.bs, so.net, {}});
      if (so.os) write_archive(basis_out + ".os.json", {*so.os, so.net, {}});
      out << "bs: " << so.bs.size() << " members";
      if (so.os) out << ", os: " << so.os->size() << " members (" << to_string(so.os->type()) << ")";
      out << "\n";
    } else if (*eval) {
      const Archive a = read_archive(eval_in);
      const auto grid = sample_grid(a.family.knots(), std::max(a.family.order(), 1), eval_n);
      const Matrix v = evaluate(a.family, grid, eval_d);
      std::ofstream f(eval_out, std::ios::binary);
      if (!f) throw Error("cannot open " + eval_out);
      f << "arg,member,value\n";
      for (int m = 0; m < v.cols(); ++m)
        for (std::size_t p = 0; p < grid.size(); ++p)
          f << format_double(grid[p]) << ',' << m << ',' << format_double(v(static_cast<Eigen::Index>(p), m)) << '\n';
    } else if (*check) {
      const Archive a = read_archive(check_in);
      const ValidityReport r = is_valid_spline(a.family);
      for (std::size_t m = 0; m < r.members.size(); ++m) out << validity_line(r.members[m], static_cast<int>(m)) << "\n";
      if (!r.all_valid()) {
        const int w = r.worst_member();
        err << "invalid: member " << w << " violates the spline constraints at knot " << r.members[w].knot << "\n";
        return 1;
      }
    } else if (*random) {
      const Archive a = read_archive(rnd_in);
      if (a.family.empty()) throw DomainError("mean archive has no members");
      const std::vector<int> first{0};
      const SplineFamily mean = subsample(a.family, first);
      NoiseSpec noise;
      noise.sigma = read_covariance(rnd_sigma, rnd_sigma_scale, mean.knots().size());
      noise.theta = read_covariance(rnd_theta, rnd_theta_scale, mean.order() + 1);
      noise.seed = rnd_seed;
      const SplineFamily draws = rspline(mean, noise, rnd_count, method_from_string(rnd_method));
      write_archive(rnd_out, {draws, std::nullopt,
                              {{"rng", std::string(kRngName)}, {"seed", std::to_string(rnd_seed)}, {"method", rnd_method}}});
    } else if (*project) {
      const BasisType type = parse_type(proj_type);
      ProjectionResult pr;
      if (!proj_csv.empty()) {
        if (!proj_knots.given() || proj_k < 0) throw CLI::ValidationError("project", "CSV input needs knots and -k");
        pr = project_data(functional_data_from_csv(read_csv(proj_csv)), proj_knots.get(), proj_k, type);
      } else if (!proj_in.empty()) {
        const Archive a = read_archive(proj_in);
        std::optional<KnotSet> target;
        if (proj_knots.given()) target = proj_knots.get();
        if (proj_k >= 0 && proj_k != a.family.order()) throw CLI::ValidationError("-k", "order differs from the archive");
        pr = project_splines(a.family, target, type);
      } else {
        throw CLI::ValidationError("project", "one of --csv or --in is required");
      }
      for (const auto& w : pr.warnings) err << "warning: " << w << "\n";
      std::vector<std::string> header;
      for (int c = 0; c < pr.coeff.cols(); ++c) header.push_back("c" + std::to_string(c + 1));
      write_csv(proj_out + ".coeff.csv", header, pr.coeff);
      write_archive(proj_out + ".proj.json", {pr.sp, std::nullopt, {}});
      write_archive(proj_out + ".basis.json", {pr.basis, std::nullopt, {}});
    } else if (*fp) {
      const Archive b = read_archive(fp_basis);
      const CsvTable t = read_csv(fp_coeff);
      if (t.values.cols() != b.family.size()) throw DomainError("coefficient columns differ from the basis size");
      ProjectionResult pr{t.values, b.family, SplineFamily(b.family.knots(), b.family.order()), std::nullopt, {}};
      const FpcaResult r = fpca(pr);
      write_csv(fp_out + ".eigenvalues.csv", {"eigenvalue"}, r.eigenvalues);
      write_archive(fp_out + ".eigenfunctions.json", {r.eigenfunctions, std::nullopt, {}});
      std::vector<std::string> header;
      for (int c = 0; c < r.retained; ++c) header.push_back("z" + std::to_string(c + 1));
      write_csv(fp_out + ".scores.csv", header, r.scores);
    } else if (*gram) {
      const Archive a = read_archive(gram_a);
      const GramMatrix g = gram_b.empty() ? gramian(a.family) : gramian(a.family, read_archive(gram_b).family);
      write_csv(gram_out, {}, g.entries);
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace splinets
