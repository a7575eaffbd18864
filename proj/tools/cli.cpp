#include "cochain/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cochain::cli {

using io::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::FormatError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  std::string text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw io::FormatError(path + " is empty");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw io::FormatError(path + ": " + e.what());
  }
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!(f << text)) {
    err << "cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

void apply_jobs(unsigned jobs) {
  if (jobs == 0) return;
  omp_set_num_threads(static_cast<int>(jobs));
  kernels::set_default_exec(jobs == 1 ? kernels::Exec::serial : kernels::Exec::parallel);
}

int cmd_approximate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Problem problem;
  SearchOptions options;
  try {
    if (!config.k) throw io::FormatError("precision -k is required");
    if (*config.k > 30) throw io::FormatError("precision -k must be at most 30");
    if (config.fuel == 0) throw io::FormatError("--fuel must be at least 1");
    if (config.m_schedule.empty() || config.subdivision_schedule.empty())
      throw io::FormatError("seed schedules must be nonempty");
    if (config.shape.empty() == config.set_file.empty())
      throw io::FormatError("give exactly one of --shape and --set-file");
    json set_spec = config.set_file.empty() ? json{{"shape", config.shape}} : read_json(config.set_file);
    SpacePtr space = config.space.empty() ? nullptr : io::parse_space(config.space);
    if (config.witness_file.empty()) {
      problem = io::problem_from_json(set_spec, nullptr, space, config.rng_seed);
    } else {
      json wf = read_json(config.witness_file);
      problem = io::problem_from_json(set_spec, &wf, space, config.rng_seed);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  apply_jobs(config.jobs);
  options.fuel_ceiling = config.fuel;
  options.m_schedule = config.m_schedule;
  options.subdivision_schedule = config.subdivision_schedule;
  options.exec = kernels::default_exec();
  options.log = [](const std::string& line) { spdlog::debug("{}", line); };

  Approximation result;
  try {
    spdlog::info("approximating {} at k={} with fuel ceiling {}", problem.set->name(), *config.k, config.fuel);
    result = approximate(problem, *config.k, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!result.certified) {
    json report = io::timeout_json(problem, result);
    write_text(config.out, report.dump(2) + "\n", out, err);
    err << "timeout: no candidate certified within fuel " << result.fuel << "\n";
    return 2;
  }
  json doc = io::certificate_json(problem, result);
  spdlog::info("certified with {} balls at fuel {}", result.balls.size(), result.fuel);
  return write_text(config.out, doc.dump(2) + "\n", out, err) ? 0 : 1;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  json doc;
  try {
    doc = read_json(path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  auto outcome = io::verify_certificate(doc);
  if (outcome.status == 0) {
    out << "ok\n";
  } else if (outcome.status == 3) {
    err << "failed: " << outcome.failed << ": " << outcome.message << "\n";
  } else {
    err << "error: " << outcome.message << "\n";
  }
  return outcome.status;
}

PlotData plot_data(const json& document, std::size_t samples) {
  SpacePtr space = io::space_from_json(io::need_field(document, "space"));
  if (space->kind() != "euclidean" || (space->dimension() != 2 && space->dimension() != 3))
    throw io::FormatError("plot data needs a Euclidean space of dimension 2 or 3");
  const std::size_t n = space->dimension();
  BallUnion balls = io::union_from_json(io::need_field(document, "balls"));

  PlotData p;
  std::ostringstream csv;
  csv << (n == 2 ? "cx,cy,r,tag\n" : "cx,cy,cz,r,tag\n");
  json rows = json::array();
  auto row = [&](const Point& c, const Rational& r, const char* tag) {
    for (const auto& x : c) csv << fmt12(to_double(x)) << ',';
    csv << fmt12(to_double(r)) << ',' << tag << '\n';
    rows.push_back({{"center", io::point_json(c)}, {"radius", io::rational_json(r)}, {"tag", tag}});
  };
  for (const auto& b : balls) {
    if (b.dim() != n) throw io::FormatError("ball dimension does not match the space");
    row(b.center(), b.radius(), "ball");
  }
  auto set = io::set_from_json(io::need_field(document, "set"), *space);
  if (const Shape* shape = set->shape())
    for (const auto& x : shape->exact_points(samples)) row(x, Rational(0), "set-sample");
  p.csv = csv.str();
  p.exact = {{"space", document.at("space")}, {"rows", std::move(rows)}};
  return p;
}

int cmd_plot_data(const std::string& input, const std::string& out_path, std::ostream& out, std::ostream& err) {
  PlotData data;
  try {
    data = plot_data(read_json(input));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!write_text(out_path, data.csv, out, err)) return 1;
  std::string sibling = (out_path.empty() ? input + ".plot" : out_path) + ".json";
  return write_text(sibling, data.exact.dump(2) + "\n", out, err) ? 0 : 1;
}

int run(int argc, char** argv) {
  auto logger = spdlog::get("cochain");
  if (!logger) logger = spdlog::stderr_color_mt("cochain");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("COCHAIN_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Certified Hausdorff approximations of co-c.e. spheres and cells"};
  app.require_subcommand(1);

  RunConfig config;
  auto* approx = app.add_subcommand("approximate", "search for a certified chain and print the approximation");
  approx->add_option("--space", config.space, "euclidean:N, RN, hilbert-cube or a JSON space object");
  approx->add_option("--shape", config.shape, "builtin shape (circle, ellipse, sphere2, disk, square_cell)");
  approx->add_option("--set-file", config.set_file, "JSON set definition");
  approx->add_option("--witness-file", config.witness_file, "JSON witness (face sets, k0, sampler)");
  approx->add_option("-k,--precision", config.k, "precision k (bound 3*2^-k or 7*2^-k)")->required();
  approx->add_option("--fuel", config.fuel, "fuel ceiling")->capture_default_str();
  approx->add_option("--jobs", config.jobs, "worker threads (1 = serial kernels)");
  approx->add_option("--rng-seed", config.rng_seed, "seed for sampler perturbations")->capture_default_str();
  approx->add_option("--out", config.out, "output file (default stdout)");
  approx->add_option("--m-schedule", config.m_schedule, "grid sizes tried by the seeded search");
  approx->add_option("--subdivisions", config.subdivision_schedule, "sub-boxes per axis tried for each grid size");

  std::string verify_path;
  unsigned verify_jobs = 0;
  auto* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("file", verify_path, "certificate JSON")->required();
  verify->add_option("--jobs", verify_jobs, "worker threads (1 = serial kernels)");

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot-data", "CSV of balls and set samples from an approximation");
  plot->add_option("file", plot_in, "approximation JSON")->required();
  plot->add_option("--out", plot_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (approx->parsed()) return cmd_approximate(config, std::cout, std::cerr);
  if (verify->parsed()) {
    apply_jobs(verify_jobs);
    return cmd_verify(verify_path, std::cout, std::cerr);
  }
  return cmd_plot_data(plot_in, plot_out, std::cout, std::cerr);
}

}  // namespace cochain::cli
