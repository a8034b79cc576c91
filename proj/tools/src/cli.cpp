#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <limits>

#include "quasicomb/detect.hpp"
#include "quasicomb/fourier.hpp"
#include "quasicomb/numerics.hpp"

namespace quasicomb::cli {

namespace {

using io::Json;

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json pair_json(const PairResult& r) {
  return Json{{"value", complex_json(r.value)},
              {"error_bound", r.error_bound},
              {"tail_bound", r.tail_bound},
              {"radius", r.radius},
              {"points", r.points}};
}

// JSON has no infinity; an unbounded gap is written as null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Emitter {
  std::ostream& out;
  std::string path;

  void operator()(const io::Document& doc) const {
    if (path.empty()) {
      out << io::dump(doc);
    } else {
      io::write_file(path, doc);
    }
  }
};

io::Document report(Json payload, const std::string& command) {
  return io::make_document("report", std::move(payload), Json{{"command", command}});
}

int classify(std::ostream& err, const char* what, int code) {
  err << "quasicomb: " << what << "\n";
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic and numeric tools for lattice combs and their Fourier transforms",
               "quasicomb"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string out_path;
  std::function<int()> action;
  Emitter emit{out, ""};

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the result document to this file");
  };

  // fourier / ifourier
  std::string in_path;
  for (const bool inverse : {false, true}) {
    auto* sub = app.add_subcommand(inverse ? "ifourier" : "fourier",
                                   inverse ? "Inverse Fourier transform of a distribution document"
                                           : "Fourier transform of a distribution document");
    sub->add_option("input", in_path, "Distribution document")->required();
    add_out(sub);
    sub->callback([&, inverse] {
      action = [&, inverse] {
        auto doc = io::read_file(in_path);
        auto f = io::decode_distribution(io::expect_kind(doc, "distribution"));
        auto g = inverse ? inverse_fourier(f) : fourier(f);
        emit(io::make_document("distribution", io::encode(g), doc.meta));
        return kOk;
      };
    });
  }

  // pair
  std::string dist_path, tf_path;
  double tol = 1e-12;
  double radius = 0;
  auto* pair_cmd = app.add_subcommand("pair", "Pair a distribution with a test function");
  pair_cmd->add_option("distribution", dist_path, "Distribution document")->required();
  pair_cmd->add_option("testfunction", tf_path, "Test function document")->required();
  pair_cmd->add_option("--tol", tol, "Target bound on the truncated lattice tail")
      ->check(CLI::PositiveNumber);
  pair_cmd->add_option("--radius", radius,
                       "Fail (exit 3) if the certified sum needs a larger truncation radius");
  add_out(pair_cmd);
  pair_cmd->callback([&] {
    action = [&] {
      auto f = io::decode_distribution(io::expect_kind(io::read_file(dist_path), "distribution"));
      auto phi = io::decode_testfunction(io::expect_kind(io::read_file(tf_path), "testfunction"));
      auto r = pair(f, phi, tol);
      if (radius > 0 && r.radius > radius)
        throw NonconvergentTail("certified tail needs radius " + std::to_string(r.radius) +
                                " > " + std::to_string(radius));
      emit(report(pair_json(r), "pair"));
      return kOk;
    };
  });

  // poisson-check
  std::string lat_path;
  double poisson_tol = 1e-10;
  auto* poisson_cmd = app.add_subcommand("poisson-check", "Check Poisson summation on a lattice");
  poisson_cmd->add_option("lattice", lat_path, "Lattice document")->required();
  poisson_cmd->add_option("testfunction", tf_path, "Test function document")->required();
  poisson_cmd->add_option("--tol", poisson_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  add_out(poisson_cmd);
  poisson_cmd->callback([&] {
    action = [&] {
      auto l = io::decode_lattice(io::expect_kind(io::read_file(lat_path), "lattice"));
      auto phi = io::decode_testfunction(io::expect_kind(io::read_file(tf_path), "testfunction"));
      auto r = poisson_check(l, phi, poisson_tol);
      emit(report(Json{{"ok", r.ok},
                       {"lhs", pair_json(r.lhs)},
                       {"rhs", pair_json(r.rhs)},
                       {"residual", r.residual},
                       {"tolerance", poisson_tol}},
                  "poisson-check"));
      return r.ok ? kOk : kVerificationFailed;
    };
  });

  // lattice dual | intersect | index
  std::string a_path, b_path;
  auto* lattice_cmd = app.add_subcommand("lattice", "Lattice algebra");
  lattice_cmd->require_subcommand(1);
  auto* dual_cmd = lattice_cmd->add_subcommand("dual", "Dual lattice");
  dual_cmd->add_option("input", a_path, "Lattice document")->required();
  add_out(dual_cmd);
  dual_cmd->callback([&] {
    action = [&] {
      auto doc = io::read_file(a_path);
      auto l = io::decode_lattice(io::expect_kind(doc, "lattice"));
      emit(io::make_document("lattice", io::encode(dual(l)), doc.meta));
      return kOk;
    };
  });
  auto* inter_cmd = lattice_cmd->add_subcommand("intersect", "Intersection of two lattices");
  inter_cmd->add_option("a", a_path, "Lattice document")->required();
  inter_cmd->add_option("b", b_path, "Lattice document")->required();
  add_out(inter_cmd);
  inter_cmd->callback([&] {
    action = [&] {
      auto a = io::decode_lattice(io::expect_kind(io::read_file(a_path), "lattice"));
      auto b = io::decode_lattice(io::expect_kind(io::read_file(b_path), "lattice"));
      emit(io::make_document("lattice", io::encode(intersect(a, b))));
      return kOk;
    };
  });
  auto* index_cmd = lattice_cmd->add_subcommand("index", "Index [L : sub] of a sublattice");
  index_cmd->add_option("sub", a_path, "Sublattice document")->required();
  index_cmd->add_option("lattice", b_path, "Lattice document")->required();
  add_out(index_cmd);
  index_cmd->callback([&] {
    action = [&] {
      auto sub = io::decode_lattice(io::expect_kind(io::read_file(a_path), "lattice"));
      auto l = io::decode_lattice(io::expect_kind(io::read_file(b_path), "lattice"));
      emit(report(Json{{"index", index_in(sub, l).get_str()}}, "lattice index"));
      return kOk;
    };
  });

  // normalize
  auto* norm_cmd = app.add_subcommand("normalize", "Rewrite a coset expression as disjoint cosets");
  norm_cmd->add_option("input", in_path, "Coset expression document")->required();
  add_out(norm_cmd);
  norm_cmd->callback([&] {
    action = [&] {
      auto e = io::decode_expression(io::expect_kind(io::read_file(in_path), "coset_expression"));
      emit(report(io::encode(normalize(e)), "normalize"));
      return kOk;
    };
  });

  // detect
  std::string cloud_path;
  int max_j = 4;
  double dist_tol = 1e-6;
  int csv_dim = 0;
  auto* detect_cmd = app.add_subcommand("detect", "Fit a finite union of lattice cosets to a point cloud");
  detect_cmd->add_option("--input", cloud_path, "CSV file or point_cloud document")->required();
  detect_cmd->add_option("--max-j", max_j, "Largest number of cosets")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--tol", dist_tol, "Distance tolerance")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--dim", csv_dim, "Coordinate columns of a headerless CSV")
      ->check(CLI::PositiveNumber);
  add_out(detect_cmd);
  detect_cmd->callback([&] {
    action = [&] {
      PointCloud cloud;
      if (cloud_path.size() >= 5 && cloud_path.substr(cloud_path.size() - 5) == ".json") {
        cloud = io::decode_point_cloud(io::expect_kind(io::read_file(cloud_path), "point_cloud"));
      } else {
        std::ifstream in(cloud_path);
        if (!in) throw ParseError("cannot open " + cloud_path);
        cloud = read_point_cloud_csv(in, csv_dim > 0 ? std::optional<int>(csv_dim) : std::nullopt);
      }
      auto fit = fit_cosets(cloud, max_j, dist_tol);
      emit(io::make_document("fit", io::encode(fit),
                             Json{{"max_j", max_j}, {"tol", dist_tol}, {"points", cloud.points.size()}}));
      return kOk;
    };
  });

  // almost-periods
  double epsilon = 0.1;
  std::vector<double> window = {0.0, 50.0};
  double pitch = 0.01;
  std::vector<double> direction;
  std::size_t term = 0;
  auto* ap_cmd = app.add_subcommand(
      "almost-periods", "Scan for almost periods of a coefficient function of a distribution");
  ap_cmd->add_option("input", in_path, "Distribution document")->required();
  ap_cmd->add_option("--term", term, "Index of the term whose coefficient is scanned");
  ap_cmd->add_option("--tol,--epsilon", epsilon, "Epsilon")->check(CLI::PositiveNumber);
  ap_cmd->add_option("--window", window, "Scan window LO HI")->expected(2);
  ap_cmd->add_option("--pitch", pitch, "Grid step")->check(CLI::PositiveNumber);
  ap_cmd->add_option("--direction", direction, "Scan direction (required when d > 1)");
  add_out(ap_cmd);
  ap_cmd->callback([&] {
    action = [&] {
      auto f = io::decode_distribution(io::expect_kind(io::read_file(in_path), "distribution"));
      if (term >= f.terms().size())
        throw std::invalid_argument("distribution has " + std::to_string(f.terms().size()) +
                                    " terms");
      const CombTerm& t = f.terms()[term];
      if (t.is_points()) throw UnsupportedTerm("point terms carry no coefficient function");
      AlmostPeriodOptions opt;
      opt.lo = window[0];
      opt.hi = window[1];
      opt.pitch = pitch;
      opt.direction = direction;
      auto r = almost_periods(t.coeff, epsilon, opt);
      emit(report(Json{{"epsilon", r.epsilon},
                       {"window", Json::array({r.lo, r.hi})},
                       {"pitch", r.pitch},
                       {"direction", r.direction},
                       {"sample_span", r.sample_span},
                       {"sample_pitch", r.sample_pitch},
                       {"sample_count", r.sample_count},
                       {"periods", r.periods},
                       {"discrepancies", r.discrepancies},
                       {"bounds", r.bounds},
                       {"max_gap", finite_or_null(r.max_gap)}},
                  "almost-periods"));
      return kOk;
    };
  });

  // verify-example
  std::string example;
  auto* verify_cmd = app.add_subcommand("verify-example", "Run a built-in verification example");
  verify_cmd->add_option("name", example, "One of: poisson-gaussian, ex-unbounded, ex-sine, coset-split")
      ->required();
  add_out(verify_cmd);
  verify_cmd->callback([&] {
    action = [&] {
      const auto& names = example_names();
      if (std::find(names.begin(), names.end(), example) == names.end())
        throw std::invalid_argument("unknown example '" + example + "'");
      auto r = run_example(example);
      r.report["ok"] = r.ok;
      emit(report(r.report, "verify-example"));
      if (!r.ok) err << "quasicomb: " << example << " residual " << r.report.value("residual", 0.0)
                     << " exceeds tolerance\n";
      return r.ok ? kOk : kVerificationFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "quasicomb: " << e.what() << "\n";
    return kInputError;
  }
  emit.path = out_path;

  try {
    return action();
  } catch (const RankDeficientIntersection& e) {
    err << "quasicomb: intersection has rank " << e.rank() << "\n";
    return classify(err, e.what(), kUnsupported);
  } catch (const UnsupportedTerm& e) {
    return classify(err, e.what(), kUnsupported);
  } catch (const NumericModeUnsupported& e) {
    return classify(err, e.what(), kUnsupported);
  } catch (const IncommensurableLeaves& e) {
    return classify(err, e.what(), kUnsupported);
  } catch (const NotDominated& e) {
    return classify(err, e.what(), kUnsupported);
  } catch (const NonconvergentTail& e) {
    return classify(err, e.what(), kUnsupported);
  } catch (const NoFit& e) {
    return classify(err, e.what(), kVerificationFailed);
  } catch (const DegenerateData& e) {
    return classify(err, e.what(), kVerificationFailed);
  } catch (const std::exception& e) {
    return classify(err, e.what(), kInputError);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"quasicomb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace quasicomb::cli
