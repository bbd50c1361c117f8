// nosignal: audits hypothetical quantum signalling devices and simulates the
// models they are built from. Subcommands cover the disentangler and
// entangler audits, two-box tunnelling dynamics, receiver decision
// statistics, and standalone isometry/locality checks.
//
// Exit codes: 0 = analysis completed (a contradiction verdict is a result,
// not a failure), 2 = argument or validation error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nosignal/common.hpp"
#include "nosignal/disentangler.hpp"
#include "nosignal/entangler.hpp"
#include "nosignal/json_io.hpp"
#include "nosignal/linmaps.hpp"
#include "nosignal/qcore.hpp"
#include "nosignal/sigstat.hpp"
#include "nosignal/tunnel.hpp"
#include "nosignal/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace nosignal;

std::string fmt_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    require(used == text.size(), "trailing characters in " + what);
    return value;
  } catch (const validation_error&) {
    throw;
  } catch (const std::exception&) {
    throw validation_error("cannot parse " + what + ": '" + text + "'");
  }
}

// Complex flags come as "RE,IM"; a bare "RE" means a real value.
cplx parse_complex(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return cplx(parse_double(text, what), 0.0);
  return cplx(parse_double(text.substr(0, comma), what + " (re)"),
              parse_double(text.substr(comma + 1), what + " (im)"));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) out.push_back(part);
  if (!text.empty() && text.back() == sep) out.push_back("");
  return out;
}

// Schedule grammar: "open" | "blocked" | comma-separated "STATE:T0..T1"
// segments, the last one may leave T1 off ("open:5..").
tunnel::Schedule parse_schedule(const std::string& text) {
  if (text == "open") return tunnel::Schedule::always(tunnel::Barrier::open);
  if (text == "blocked")
    return tunnel::Schedule::always(tunnel::Barrier::blocked);

  std::vector<tunnel::Segment> segments;
  for (const std::string& part : split(text, ',')) {
    const auto colon = part.find(':');
    require(colon != std::string::npos,
            "schedule segment needs STATE:T0..T1, got '" + part + "'");
    const std::string state = part.substr(0, colon);
    tunnel::Segment seg;
    if (state == "open")
      seg.barrier = tunnel::Barrier::open;
    else if (state == "blocked")
      seg.barrier = tunnel::Barrier::blocked;
    else
      throw validation_error("unknown barrier state '" + state + "'");

    const std::string range = part.substr(colon + 1);
    const auto dots = range.find("..");
    require(dots != std::string::npos,
            "schedule range needs T0..T1, got '" + range + "'");
    seg.begin = parse_double(range.substr(0, dots), "schedule time");
    const std::string end = range.substr(dots + 2);
    if (!end.empty()) seg.end = parse_double(end, "schedule time");
    segments.push_back(seg);
  }
  return tunnel::Schedule(std::move(segments));
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  require(parts.size() == 3, "grid needs T0:T1:DT, got '" + text + "'");
  const double t0 = parse_double(parts[0], "grid start");
  const double t1 = parse_double(parts[1], "grid end");
  const double dt = parse_double(parts[2], "grid step");
  require(dt > 0.0, "grid step must be positive");
  require(t1 >= t0, "grid end before grid start");
  std::vector<double> out;
  for (double t = t0; t <= t1 + dt * 1e-9; t += dt) out.push_back(t);
  return out;
}

std::string iso_timestamp() {
  std::time_t now;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  else
    now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest(const std::string& subcommand, json parameters) {
  return json{{"schema", schema_version},
              {"tool", "nosignal"},
              {"tool_version", version},
              {"timestamp", iso_timestamp()},
              {"subcommand", subcommand},
              {"parameters", std::move(parameters)}};
}

// Human-readable rendering of the same document the JSON mode emits;
// numbers go through the identical serializer, so values match exactly.
void print_human(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      const bool nested =
          value.is_object() ||
          (value.is_array() && !value.empty() &&
           (value.front().is_object() || value.front().is_array()));
      if (nested) {
        os << pad << key << ":\n";
        print_human(os, value, indent + 2);
      } else {
        os << pad << key << ": " << value.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad << "[" << i << "]\n";
      print_human(os, j[i], indent + 2);
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

void emit(const json& doc, bool as_json) {
  if (as_json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << doc["subcommand"].get<std::string>() << " (nosignal "
              << doc["tool_version"].get<std::string>() << ", "
              << doc["timestamp"].get<std::string>() << ")\n";
    print_human(std::cout, doc["results"]);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open file '" + path + "'");
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const std::exception& e) {
    throw validation_error("cannot parse JSON in '" + path + "': " + e.what());
  }
}

Eigen::MatrixXcd matrix_from_json(const json& doc) {
  require(doc.contains("re") && doc.contains("im"),
          "matrix JSON needs 're' and 'im' arrays");
  const auto& re = doc["re"];
  const auto& im = doc["im"];
  require(re.is_array() && im.is_array() && re.size() == im.size() &&
              !re.empty(),
          "matrix 're'/'im' must be equal-shaped non-empty arrays");
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].size();
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    require(re[i].size() == cols && im[i].size() == cols,
            "matrix rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cplx(re[i][j].get<double>(), im[i][j].get<double>());
  }
  return m;
}

// --- subcommand drivers ----------------------------------------------------

struct DisentanglerArgs {
  std::string alpha, beta;
  bool as_json = false;
};

int run_disentangler(const DisentanglerArgs& args) {
  disentangler::Target target{parse_complex(args.alpha, "--alpha"),
                              parse_complex(args.beta, "--beta")};
  const auto verdict = disentangler::audit(target);
  const auto shift = disentangler::receiver_shift(target);

  json doc = manifest(
      "disentangler",
      json{{"alpha", jsonio::complex_json(target.alpha)},
           {"beta", jsonio::complex_json(target.beta)}});
  doc["results"] = jsonio::verdict_json(verdict, shift);
  emit(doc, args.as_json);
  return 0;
}

struct EntanglerArgs {
  std::string signs;
  bool all = false;
  std::string phase2 = "0,1";
  std::string general;
  bool as_json = false;
};

json entangler_record(const entangler::Params& params) {
  json record = jsonio::entangler_audit_json(entangler::audit(params));

  const auto full = entangler::embed_full(params);
  const auto factor =
      linmaps::local_factor(linmaps::matrix_of(full), 2, 2, 0);
  record["locality"] = jsonio::factor_json(factor);
  record["locality"]["extension"] = "identity-on-complement";

  const auto initial = qcore::StateVector::basis(qcore::Space::photon_pair(),
                                                 {"H", "H"});
  record["demo"] = jsonio::entangler_demo_json(entangler::demo(initial, params));
  return record;
}

int run_entangler(const EntanglerArgs& args) {
  const cplx phase2 = parse_complex(args.phase2, "--phase2");
  std::vector<entangler::Params> runs;

  if (!args.general.empty()) {
    const auto parts = split(args.general, ',');
    require(parts.size() == 4,
            "--general needs A_RE,A_IM,B_RE,B_IM");
    entangler::Params p;
    p.phase2 = phase2;
    p.general = {{parse_double(parts[0], "--general a (re)"),
                  parse_double(parts[1], "--general a (im)")},
                 {parse_double(parts[2], "--general b (re)"),
                  parse_double(parts[3], "--general b (im)")}};
    runs.push_back(p);
  } else if (!args.signs.empty() && !args.all) {
    require(args.signs.size() == 2 &&
                (args.signs[0] == '+' || args.signs[0] == '-') &&
                (args.signs[1] == '+' || args.signs[1] == '-'),
            "--signs must be one of ++, +-, -+, --");
    entangler::Params p;
    p.sign1 = args.signs[0] == '+' ? +1 : -1;
    p.sign2 = args.signs[1] == '+' ? +1 : -1;
    p.phase2 = phase2;
    runs.push_back(p);
  } else {
    for (auto& p : entangler::four_readings()) {
      p.phase2 = phase2;
      runs.push_back(p);
    }
  }

  json records = json::array();
  for (const auto& params : runs) records.push_back(entangler_record(params));

  json parameters{{"signs", args.general.empty()
                                ? (runs.size() == 4 ? json("all")
                                                    : json(runs[0].signs()))
                                : json(nullptr)},
                  {"phase2", jsonio::complex_json(phase2)}};
  parameters["general"] =
      args.general.empty()
          ? json(nullptr)
          : json{{"a", jsonio::complex_json(runs[0].general->first)},
                 {"b", jsonio::complex_json(runs[0].general->second)}};

  json doc = manifest("entangler", parameters);
  doc["results"] = json{{"readings", records}};
  emit(doc, args.as_json);
  return 0;
}

struct TunnelArgs {
  double gamma = 1.0;
  std::string schedule = "open";
  std::string grid;
  bool spin = false;
  bool as_csv = false;
  bool as_json = false;
};

int run_tunnel(const TunnelArgs& args) {
  require(args.gamma > 0.0, "--gamma must be positive");
  tunnel::TunnelConfig config{args.gamma, parse_schedule(args.schedule), {}};

  std::string grid_text = args.grid;
  if (grid_text.empty()) {
    // One occupancy period in 320 steps, clipped to the schedule's cover.
    double horizon = std::numbers::pi / args.gamma;
    horizon = std::min(horizon, config.schedule.cover_end());
    grid_text = "0:" + fmt_double(horizon) + ":" + fmt_double(horizon / 320.0);
  }
  config.t_grid = parse_grid(grid_text);
  config.validate();

  const tunnel::TwoBoxState initial{cplx(1, 0), cplx(0, 0)};
  const auto samples = tunnel::trace(config, initial);
  const auto balance = tunnel::time_to_balance(config);
  const auto final_state =
      tunnel::evolve(config, initial, config.t_grid.back());

  json parameters{{"gamma", args.gamma},
                  {"schedule", args.schedule},
                  {"grid", grid_text},
                  {"spin", args.spin},
                  {"format", args.as_csv ? "csv" : (args.as_json ? "json" : "human")}};

  if (args.as_csv) {
    json meta = manifest("tunnel", parameters);
    std::cout << "# manifest: " << meta.dump() << "\n";
    std::cout << "t,p1,p2,re1,im1,re2,im2\n";
    for (const auto& s : samples)
      std::cout << fmt_double(s.t) << ',' << fmt_double(s.p1) << ','
                << fmt_double(s.p2) << ',' << fmt_double(s.amp1.real()) << ','
                << fmt_double(s.amp1.imag()) << ',' << fmt_double(s.amp2.real())
                << ',' << fmt_double(s.amp2.imag()) << "\n";
    return 0;
  }

  const qcore::Space space =
      args.spin ? qcore::Space::spin_pair() : qcore::Space::boxes();
  json basis = json::array();
  basis.push_back(args.spin ? space.label(space.index_of({"+", "-"}))
                            : space.label(space.index_of({"1", "0"})));
  basis.push_back(args.spin ? space.label(space.index_of({"-", "+"}))
                            : space.label(space.index_of({"0", "1"})));

  json balance_json{{"reached", balance.has_value()}};
  balance_json["t"] = balance ? json(*balance) : json(nullptr);
  balance_json["open_time_needed"] =
      std::numbers::pi / (4.0 * args.gamma);

  json doc = manifest("tunnel", parameters);
  doc["results"] =
      json{{"gamma", args.gamma},
           {"schedule", jsonio::schedule_json(config.schedule)},
           {"generator",
            json{{"type", "two-level hopping"},
                 {"support", json::array({"X1", "X2"})},
                 {"note", "barrier removal switches a coupling that lives on "
                          "both boxes; the report takes no position on "
                          "whether that counts as local to X1"}}},
           {"basis", basis},
           {"balance", balance_json},
           {"final",
            json{{"t", config.t_grid.back()},
                 {"amp1", jsonio::complex_json(final_state.amp1)},
                 {"amp2", jsonio::complex_json(final_state.amp2)}}},
           {"trace", jsonio::trace_json(samples)}};
  emit(doc, args.as_json);
  return 0;
}

struct SignalArgs {
  double p0 = 1.0;
  double p1 = 0.5;
  int n = 1;
  int k_threshold = -1;  // -1 = pick the total-min-optimal threshold
  double epsilon = -1.0;
  std::string message;
  std::string seed;
  bool as_json = false;
};

int run_signal(const SignalArgs& args) {
  sigstat::SignalBudget budget{args.p0, args.p1, args.n, 0};
  std::string threshold_source = "optimal";
  if (args.k_threshold >= 0) {
    budget.k_threshold = args.k_threshold;
    threshold_source = "user";
    budget.validate();
  } else {
    budget.validate();
    budget.k_threshold = sigstat::decision_errors(budget).best_threshold;
  }
  const auto errors = sigstat::decision_errors(budget);

  std::uint64_t seed = 0;
  std::string seed_source = "default";
  if (!args.seed.empty()) {
    seed = std::strtoull(args.seed.c_str(), nullptr, 10);
    seed_source = "flag";
  } else if (const char* env = std::getenv("NOSIGNAL_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
    seed_source = "env";
  }

  json parameters{{"p0", args.p0},
                  {"p1", args.p1},
                  {"n", args.n},
                  {"k_threshold", budget.k_threshold},
                  {"k_threshold_source", threshold_source}};
  parameters["epsilon"] = args.epsilon > 0.0 ? json(args.epsilon) : json(nullptr);
  parameters["message"] =
      args.message.empty() ? json(nullptr) : json(args.message);
  parameters["seed"] = seed;
  parameters["seed_source"] = seed_source;

  json results{{"budget", json{{"p0", budget.p0},
                               {"p1", budget.p1},
                               {"n", budget.n},
                               {"k_threshold", budget.k_threshold}}},
               {"errors", jsonio::error_report_json(errors)}};

  results["required"] = json(nullptr);
  if (args.epsilon > 0.0) {
    const auto req =
        sigstat::required_samples(args.p0, args.p1, args.epsilon);
    results["required"] = jsonio::requirement_json(req);
  }

  results["simulation"] = json(nullptr);
  if (!args.message.empty()) {
    std::vector<int> bits;
    for (char c : args.message) {
      require(c == '0' || c == '1', "--message must be a string of 0s and 1s");
      bits.push_back(c - '0');
    }
    results["simulation"] =
        jsonio::sim_report_json(sigstat::simulate(budget, bits, seed));
  }

  json doc = manifest("signal", parameters);
  doc["results"] = std::move(results);
  emit(doc, args.as_json);
  return 0;
}

struct GramArgs {
  std::string map_file;
  bool as_json = false;
};

int run_gram(const GramArgs& args) {
  const json input = load_json_file(args.map_file);
  require(input.contains("images") && input["images"].is_array() &&
              !input["images"].empty(),
          "map JSON needs a non-empty 'images' array");

  std::vector<std::vector<cplx>> images;
  for (const auto& entry : input["images"]) {
    require(entry.contains("re") && entry.contains("im") &&
                entry["re"].is_array() && entry["im"].is_array() &&
                entry["re"].size() == entry["im"].size(),
            "each image needs equal-length 're' and 'im' arrays");
    std::vector<cplx> image;
    for (std::size_t i = 0; i < entry["re"].size(); ++i)
      image.emplace_back(entry["re"][i].get<double>(),
                         entry["im"][i].get<double>());
    images.push_back(std::move(image));
  }

  linmaps::BasisMapSpec spec{qcore::Space::generic(images.size()),
                             qcore::Space::generic(images.front().size()),
                             std::move(images)};
  const auto report = linmaps::gram(spec);
  const auto witness = linmaps::non_isometry_witness(report);

  json doc = manifest("gram", json{{"map", input}});
  doc["results"] = json{{"domain_dim", spec.domain.dim()},
                        {"codomain_dim", spec.codomain.dim()},
                        {"gram_report", jsonio::gram_json(report)}};
  doc["results"]["witness"] =
      witness ? jsonio::witness_json(*witness, spec.domain) : json(nullptr);
  emit(doc, args.as_json);
  return 0;
}

struct FactorArgs {
  std::string matrix_file;
  std::string dims;
  int acted = 1;
  bool as_json = false;
};

int run_factor(const FactorArgs& args) {
  const json input = load_json_file(args.matrix_file);
  const Eigen::MatrixXcd m = matrix_from_json(input);

  const auto parts = split(args.dims, ',');
  require(parts.size() == 2, "--dims needs D1,D2");
  const auto d1 = static_cast<std::size_t>(
      parse_double(parts[0], "--dims d1"));
  const auto d2 = static_cast<std::size_t>(
      parse_double(parts[1], "--dims d2"));
  require(args.acted == 1 || args.acted == 2, "--acted must be 1 or 2");

  const auto report = linmaps::local_factor(
      m, d1, d2, static_cast<std::size_t>(args.acted - 1));

  json doc = manifest("factor", json{{"matrix", input},
                                     {"dims", json::array({d1, d2})},
                                     {"acted", args.acted}});
  doc["results"] = jsonio::factor_json(report);
  emit(doc, args.as_json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audits for hypothetical quantum signalling devices"};
  app.set_version_flag("--version", std::string("nosignal ") + version);
  app.require_subcommand(1);

  DisentanglerArgs dis;
  auto* dis_cmd = app.add_subcommand(
      "disentangler",
      "solve the forced local coefficients for a disentangling target and "
      "audit them against unitarity");
  dis_cmd->add_option("--alpha", dis.alpha, "target H1H2 coefficient, RE[,IM]")
      ->required();
  dis_cmd->add_option("--beta", dis.beta, "target V1V2 coefficient, RE[,IM]")
      ->required();
  dis_cmd->add_flag("--json", dis.as_json, "emit the JSON report");

  EntanglerArgs ent;
  auto* ent_cmd = app.add_subcommand(
      "entangler",
      "audit the product-to-entangled device under its sign readings");
  ent_cmd->add_option("--signs", ent.signs, "one reading: ++, +-, -+ or --");
  ent_cmd->add_flag("--all", ent.all, "audit all four sign readings (default)");
  ent_cmd->add_option("--phase2", ent.phase2,
                      "unit phase on the second image, RE[,IM] (default i)");
  ent_cmd->add_option("--general", ent.general,
                      "general form a,b as A_RE,A_IM,B_RE,B_IM");
  ent_cmd->add_flag("--json", ent.as_json, "emit the JSON report");

  TunnelArgs tun;
  auto* tun_cmd = app.add_subcommand(
      "tunnel", "two-box (or spin) tunnelling dynamics with a barrier schedule");
  tun_cmd->add_option("--gamma", tun.gamma, "coupling rate, radians per unit time")
      ->required();
  tun_cmd->add_option("--schedule", tun.schedule,
                      "barrier schedule, e.g. open or blocked:0..2,open:2..");
  tun_cmd->add_option("--grid", tun.grid, "sample times T0:T1:DT");
  tun_cmd->add_flag("--spin", tun.spin, "report in the spin-pair basis");
  tun_cmd->add_flag("--csv", tun.as_csv, "emit the plot-ready CSV trace");
  tun_cmd->add_flag("--json", tun.as_json, "emit the JSON report");

  SignalArgs sig;
  auto* sig_cmd = app.add_subcommand(
      "signal", "receiver decision errors for the many-particle protocol");
  sig_cmd->add_option("--p0", sig.p0, "per-particle probability, sender idle")
      ->required();
  sig_cmd->add_option("--p1", sig.p1, "per-particle probability, sender acted")
      ->required();
  sig_cmd->add_option("--n", sig.n, "samples per message bit")->required();
  sig_cmd->add_option("--k-threshold", sig.k_threshold,
                      "decision threshold (default: best total error)");
  sig_cmd->add_option("--epsilon", sig.epsilon,
                      "also scan for the minimal n with both errors <= epsilon");
  sig_cmd->add_option("--message", sig.message, "bits to push through the channel");
  sig_cmd->add_option("--seed", sig.seed,
                      "RNG seed (fallback: NOSIGNAL_SEED, then 0)");
  sig_cmd->add_flag("--json", sig.as_json, "emit the JSON report");

  GramArgs gram_args;
  auto* gram_cmd = app.add_subcommand(
      "gram", "Gram-matrix isometry audit of a basis-image map");
  gram_cmd->add_option("--map", gram_args.map_file,
                       "JSON file: {\"images\": [{\"re\": [...], \"im\": [...]}, ...]}")
      ->required();
  gram_cmd->add_flag("--json", gram_args.as_json, "emit the JSON report");

  FactorArgs fac;
  auto* fac_cmd = app.add_subcommand(
      "factor", "does a joint-space matrix act on one subsystem only?");
  fac_cmd->add_option("--matrix", fac.matrix_file,
                      "JSON file: {\"re\": [[...]], \"im\": [[...]]}")
      ->required();
  fac_cmd->add_option("--dims", fac.dims, "subsystem dimensions D1,D2")
      ->required();
  fac_cmd->add_option("--acted", fac.acted,
                      "side the factor should act on: 1 or 2 (default 1)");
  fac_cmd->add_flag("--json", fac.as_json, "emit the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dis_cmd->parsed()) return run_disentangler(dis);
    if (ent_cmd->parsed()) return run_entangler(ent);
    if (tun_cmd->parsed()) return run_tunnel(tun);
    if (sig_cmd->parsed()) return run_signal(sig);
    if (gram_cmd->parsed()) return run_gram(gram_args);
    if (fac_cmd->parsed()) return run_factor(fac);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
