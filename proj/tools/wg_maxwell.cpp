// Command-line driver: convergence studies and slice export for the weak
// Galerkin Maxwell solver on uniform meshes of the unit cube.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wg/verify.hpp"

namespace {

struct Options {
  std::vector<std::string> cases;
  std::string levels = "1..5";
  int level = 0;  // single-level shorthand; 0 = unset
  int order = 1;
  std::string variant = "full";
  std::string path = "condensed";
  int quad = 0;  // 0 = default rule for the order
  std::string format = "text";
  double slice_z = -1.0;  // <0 = no slice requested
  int slice_res = 64;
  std::string out;
  double nu = 1.0;
};

std::pair<int, int> parse_levels(const std::string& text) {
  const auto dots = text.find("..");
  int lo = 0, hi = 0;
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--levels expects N or A..B, got '" + text + "'");
  }
  if (lo < 1 || hi < lo || hi > 6) {
    throw CLI::ValidationError("--levels must satisfy 1 <= A <= B <= 6");
  }
  return {lo, hi};
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

std::string fmt_rate(double r) {
  if (std::isnan(r)) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << r;
  return os.str();
}

std::string fmt_full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct NormColumn {
  const char* header;   // text table header
  const char* key;      // csv/json key
  double wg::ErrorRow::* field;
};

constexpr NormColumn kColumns[] = {
    {"|||e|||_1", "u_h1", &wg::ErrorRow::u_h1},
    {"||e_0||", "u_l2", &wg::ErrorRow::u_l2},
    {"|||eps|||_0", "p_l2_like", &wg::ErrorRow::p_l2_like},
    {"|||eps|||_0h", "p_face_avg", &wg::ErrorRow::p_face_avg},
    {"||eps_0||", "p_l2", &wg::ErrorRow::p_l2},
};

std::vector<std::vector<double>> rate_table(const wg::StudyReport& rep) {
  std::vector<std::vector<double>> rates;
  for (const NormColumn& col : kColumns) {
    std::vector<double> values;
    for (const wg::StudyRow& row : rep.rows) values.push_back(row.errors.*col.field);
    rates.push_back(wg::convergence_rates(values));
  }
  return rates;
}

void write_text(const std::vector<wg::StudyReport>& reports, std::ostream& os) {
  for (const wg::StudyReport& rep : reports) {
    os << "# case " << rep.case_name << "  (order " << rep.disc.k << ", "
       << (rep.disc.variant == wg::ScalarVariant::Lowest ? "lowest" : "full")
       << " scalar faces, "
       << (rep.path == wg::SolvePath::Condensed ? "condensed" : "full")
       << " path, nu " << rep.nu << ")\n";
    os << std::left << std::setw(6) << "level" << std::setw(10) << "h"
       << std::setw(10) << "unknowns";
    for (const NormColumn& col : kColumns) {
      os << std::setw(14) << col.header << std::setw(7) << "rate";
    }
    os << "\n";
    const auto rates = rate_table(rep);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const wg::StudyRow& row = rep.rows[i];
      std::ostringstream h;
      h << std::fixed << std::setprecision(6) << row.h;
      os << std::left << std::setw(6) << row.level << std::setw(10) << h.str()
         << std::setw(10) << row.unknowns;
      for (std::size_t c = 0; c < std::size(kColumns); ++c) {
        os << std::setw(14) << fmt_value(row.errors.*kColumns[c].field)
           << std::setw(7) << fmt_rate(rates[c][i]);
      }
      os << "\n";
    }
    os << "\n";
  }
}

void write_csv(const std::vector<wg::StudyReport>& reports, std::ostream& os) {
  os << "case,variant,path,order,nu,level,h,unknowns";
  for (const NormColumn& col : kColumns) {
    os << "," << col.key << "," << col.key << "_rate";
  }
  os << ",solver_residual\n";
  for (const wg::StudyReport& rep : reports) {
    const auto rates = rate_table(rep);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const wg::StudyRow& row = rep.rows[i];
      os << rep.case_name << ','
         << (rep.disc.variant == wg::ScalarVariant::Lowest ? "lowest" : "full")
         << ','
         << (rep.path == wg::SolvePath::Condensed ? "condensed" : "full") << ','
         << rep.disc.k << ',' << fmt_full(rep.nu) << ',' << row.level << ','
         << fmt_full(row.h) << ',' << row.unknowns;
      for (std::size_t c = 0; c < std::size(kColumns); ++c) {
        os << ',' << fmt_full(row.errors.*kColumns[c].field) << ','
           << (std::isnan(rates[c][i]) ? std::string() : fmt_full(rates[c][i]));
      }
      os << ',' << fmt_full(row.solver_residual) << "\n";
    }
  }
}

void write_json(const std::vector<wg::StudyReport>& reports, std::ostream& os) {
  nlohmann::ordered_json root;
  root["cases"] = nlohmann::ordered_json::array();
  for (const wg::StudyReport& rep : reports) {
    nlohmann::ordered_json jc;
    jc["case"] = rep.case_name;
    jc["order"] = rep.disc.k;
    jc["variant"] =
        rep.disc.variant == wg::ScalarVariant::Lowest ? "lowest" : "full";
    jc["path"] =
        rep.path == wg::SolvePath::Condensed ? "condensed" : "full";
    jc["nu"] = rep.nu;
    jc["rows"] = nlohmann::ordered_json::array();
    const auto rates = rate_table(rep);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const wg::StudyRow& row = rep.rows[i];
      nlohmann::ordered_json jr;
      jr["level"] = row.level;
      jr["h"] = row.h;
      jr["unknowns"] = row.unknowns;
      for (std::size_t c = 0; c < std::size(kColumns); ++c) {
        jr[kColumns[c].key] = row.errors.*kColumns[c].field;
        if (!std::isnan(rates[c][i])) {
          jr[std::string(kColumns[c].key) + "_rate"] = rates[c][i];
        }
      }
      jr["solver_residual"] = row.solver_residual;
      jc["rows"].push_back(std::move(jr));
    }
    root["cases"].push_back(std::move(jc));
  }
  os << root.dump(2) << "\n";
}

int run_slice(const Options& opt, int level) {
  const wg::ManufacturedCase mc = wg::manufactured_case(opt.cases.front());
  const wg::Discretization disc{
      opt.order,
      opt.variant == "lowest" ? wg::ScalarVariant::Lowest
                              : wg::ScalarVariant::Full,
      opt.quad};
  const wg::Mesh mesh = wg::build_mesh(level);
  const wg::ProblemData data = mc.problem(opt.nu);
  const wg::WeakFieldPair sol =
      wg::solve_case(mesh, data, disc,
                     opt.path == "full" ? wg::SolvePath::Full
                                        : wg::SolvePath::Condensed);
  const std::vector<wg::SliceField> fields =
      wg::sample_slice(mesh, disc, mc, sol, opt.slice_z, opt.slice_res);

  if (opt.out.empty()) {
    for (const wg::SliceField& f : fields) {
      std::cout << "# " << f.name << "\n";
      wg::write_slice_csv(f, std::cout);
    }
    return 0;
  }
  std::filesystem::create_directories(opt.out);
  for (const wg::SliceField& f : fields) {
    const std::filesystem::path file =
        std::filesystem::path(opt.out) /
        (mc.name + "_level" + std::to_string(level) + "_" + f.name + ".csv");
    std::ofstream os(file);
    if (!os) {
      std::cerr << "wg-maxwell: cannot open " << file << " for writing\n";
      return 1;
    }
    wg::write_slice_csv(f, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{
      "Weak Galerkin solver for the time-harmonic Maxwell saddle problem "
      "on uniform meshes of the unit cube: convergence studies and slice "
      "export for manufactured solutions."};
  app.add_option("--case", opt.cases,
                 "Manufactured case (repeatable; default: all four)")
      ->check(CLI::IsMember(wg::manufactured_case_names()));
  auto* levels_opt =
      app.add_option("--levels", opt.levels, "Refinement levels N or A..B");
  app.add_option("--level", opt.level, "Single refinement level")
      ->check(CLI::Range(1, 6))
      ->excludes(levels_opt);
  app.add_option("--order", opt.order, "Polynomial order k")
      ->check(CLI::Range(1, 4));
  app.add_option("--variant", opt.variant,
                 "Scalar face space: full (degree k) or lowest (constants)")
      ->check(CLI::IsMember({"full", "lowest"}));
  app.add_option("--path", opt.path, "Solve path")
      ->check(CLI::IsMember({"condensed", "full"}));
  app.add_option("--quad", opt.quad,
                 "Gauss points per axis (0 = default for the order)")
      ->check(CLI::Range(0, 12));
  app.add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--slice-z", opt.slice_z,
                 "Export sampled fields on the plane z = Z instead of a study");
  app.add_option("--slice-res", opt.slice_res,
                 "Samples per axis for slice export")
      ->check(CLI::Range(1, 4096));
  app.add_option("--out", opt.out,
                 "Output file (studies) or directory (slices); default stdout");
  app.add_option("--nu", opt.nu, "Uniform material coefficient")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  int level_lo = 0, level_hi = 0;
  try {
    if (opt.level > 0) {
      level_lo = level_hi = opt.level;
    } else {
      std::tie(level_lo, level_hi) = parse_levels(opt.levels);
    }
  } catch (const CLI::ValidationError& e) {
    return app.exit(e);
  }
  if (opt.cases.empty()) opt.cases = wg::manufactured_case_names();

  if (opt.slice_z >= 0.0) {
    if (!(opt.slice_z > 0.0 && opt.slice_z < 1.0)) {
      std::cerr << "wg-maxwell: --slice-z must lie strictly inside (0, 1)\n";
      return 1;
    }
    if (opt.cases.size() != 1 || level_lo != level_hi) {
      std::cerr << "wg-maxwell: slice export needs exactly one --case and a "
                   "single level\n";
      return 1;
    }
    try {
      return run_slice(opt, level_lo);
    } catch (const std::exception& e) {
      std::cerr << "wg-maxwell: case " << opt.cases.front() << " level "
                << level_lo << ": " << e.what() << "\n";
      return 1;
    }
  }

  std::vector<wg::StudyReport> reports;
  for (const std::string& name : opt.cases) {
    int level = level_lo;
    try {
      const wg::ManufacturedCase mc = wg::manufactured_case(name);
      const wg::Discretization disc{
          opt.order,
          opt.variant == "lowest" ? wg::ScalarVariant::Lowest
                                  : wg::ScalarVariant::Full,
          opt.quad};
      // Run level by level so failures carry the level context.
      wg::StudyReport rep;
      for (level = level_lo; level <= level_hi; ++level) {
        wg::StudyReport one = wg::convergence_study(
            mc, level, level, disc,
            opt.path == "full" ? wg::SolvePath::Full
                               : wg::SolvePath::Condensed,
            opt.nu);
        if (rep.rows.empty()) {
          rep = one;
        } else {
          rep.rows.push_back(one.rows.front());
        }
      }
      reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      std::cerr << "wg-maxwell: case " << name << " level " << level << ": "
                << e.what() << "\n";
      return 1;
    }
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) {
      std::cerr << "wg-maxwell: cannot open " << opt.out << " for writing\n";
      return 1;
    }
    os = &file;
  }
  if (opt.format == "text") {
    write_text(reports, *os);
  } else if (opt.format == "csv") {
    write_csv(reports, *os);
  } else {
    write_json(reports, *os);
  }
  return 0;
}
