#include "ergolab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergolab/correlate.hpp"
#include "ergolab/dynsys.hpp"
#include "ergolab/gowers.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/report_io.hpp"
#include "ergolab/seqgen.hpp"
#include "ergolab/spec_text.hpp"
#include "ergolab/spectral.hpp"
#include "ergolab/verify.hpp"
#include "json.hpp"

namespace ergolab {

namespace {

using nlohmann::json;

// Usage errors detected after CLI11 parsing (exit 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class OptType { scalar, list, flag };

struct OptDef {
  const char* name;
  OptType type;
  const char* commands;  // letters: c correlate, s spectrum, g gowers, v verify, r search, o orbit-spectrum
  const char* help;
};

const std::vector<OptDef>& option_table() {
  static const std::vector<OptDef> table = {
      {"system", OptType::scalar, "csvo", "system spec, e.g. rot:alpha=sqrt(2)-1"},
      {"obs", OptType::list, "csvo", "observable spec (repeatable)"},
      {"seq", OptType::scalar, "csgvr", "index sequence spec, e.g. arith:q=3,r=1"},
      {"weight", OptType::scalar, "csgv", "weight spec, e.g. mangoldt_prime"},
      {"N", OptType::list, "csgvo", "length, or comma separated schedule for verify"},
      {"M", OptType::scalar, "csv", "number of quadrature samples"},
      {"sampling", OptType::scalar, "csv", "grid or orbit"},
      {"point", OptType::scalar, "csvo", "base point, e.g. 1/4,0"},
      {"method", OptType::scalar, "csv", "auto, analytic or pointwise"},
      {"normalization", OptType::scalar, "c", "count, cesaro or weight_sum"},
      {"windows", OptType::scalar, "v", "number of windows for uniform averages"},
      {"tau", OptType::scalar, "so", "peak threshold"},
      {"oversample", OptType::scalar, "so", "FFT oversampling factor (power of 2)"},
      {"refine", OptType::scalar, "so", "refine peaks (true/false)"},
      {"tol", OptType::scalar, "sv", "tolerance"},
      {"bound", OptType::scalar, "s", "coefficient bound for the theoretical spectrum"},
      {"sigma-of", OptType::scalar, "s", "system whose spectrum must contain the peaks"},
      {"s", OptType::scalar, "g", "Gowers norm order"},
      {"gowers-method", OptType::scalar, "g", "auto, naive or fft"},
      {"wtrick", OptType::list, "g", "comma separated w values for the W-trick sweep"},
      {"wtrick-mode", OptType::scalar, "g", "classic or beatty:theta=..,gamma=.."},
      {"hyp-bound", OptType::scalar, "v", "coefficient bound of the hypothesis check"},
      {"phi-spectrum", OptType::scalar, "v", "comma separated generators of the weight spectrum"},
      {"phi-rational", OptType::flag, "v", "weight spectrum contains all rationals"},
      {"transfer", OptType::flag, "v", "compare prime and von Mangoldt averages"},
      {"force", OptType::flag, "v", "run even when the hypothesis fails"},
      {"k", OptType::scalar, "ro", "progression length (search) or number of diagonal copies"},
      {"L", OptType::scalar, "r", "random set universe [1, L]"},
      {"density", OptType::scalar, "r", "random set density"},
      {"set", OptType::scalar, "r", "file of integers forming the set"},
      {"seed", OptType::scalar, "r", "random seed"},
      {"out", OptType::scalar, "csgvro", "main output path (- for stdout)"},
      {"csv", OptType::scalar, "v", "convergence CSV path"},
      {"peaks-out", OptType::scalar, "so", "peaks JSON path (default stdout)"},
  };
  return table;
}

const std::vector<std::pair<std::string, char>>& commands() {
  static const std::vector<std::pair<std::string, char>> cmds = {
      {"correlate", 'c'}, {"spectrum", 's'}, {"gowers", 'g'}, {"verify", 'v'}, {"search", 'r'}, {"orbit-spectrum", 'o'}};
  return cmds;
}

char command_letter(const std::string& cmd) {
  for (const auto& [name, c] : commands())
    if (name == cmd) return c;
  return 0;
}

const OptDef* find_option(const std::string& key) {
  for (const auto& o : option_table())
    if (key == o.name) return &o;
  return nullptr;
}

bool option_applies(const OptDef& o, char letter) { return std::string(o.commands).find(letter) != std::string::npos; }

json defaults_for(const std::string& cmd) {
  json d = json::object();
  const char c = command_letter(cmd);
  if (c == 'c' || c == 's' || c == 'v') {
    d["sampling"] = "grid";
    d["method"] = "auto";
  }
  if (c == 's' || c == 'o') {
    d["tau"] = "0.05";
    d["oversample"] = "4";
    d["refine"] = "true";
  }
  if (c == 's') d["bound"] = "8";
  if (c == 'g') {
    d["s"] = "2";
    d["gowers-method"] = "auto";
    d["wtrick-mode"] = "classic";
  }
  if (c == 'v') {
    d["windows"] = "8";
    d["tol"] = "0.05";
    d["hyp-bound"] = "20";
    d["force"] = false;
    d["transfer"] = false;
    d["phi-rational"] = false;
  }
  if (c == 'r') {
    d["k"] = "3";
    d["L"] = "10000";
    d["density"] = "0.3";
    d["seed"] = "0";
  }
  if (c == 'o') d["k"] = "2";
  return d;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, a JSON file (optionally wrapping a "config" object), or any
// output file carrying a `# config: {...}` header line.
json load_config(const std::string& arg) {
  auto parse_object = [](const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw UsageError("config is not a JSON object");
    if (j.contains("config") && j["config"].is_object()) return json(j["config"]);
    return j;
  };
  if (!arg.empty() && arg.front() == '{') return parse_object(arg);
  const std::string text = slurp(arg);
  std::istringstream lines(text);
  std::string line;
  const std::string marker = "# config: ";
  while (std::getline(lines, line))
    if (line.rfind(marker, 0) == 0) return parse_object(line.substr(marker.size()));
  return parse_object(text);
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw UsageError("config value " + v.dump() + " is not a scalar");
}

json normalize_value(const OptDef& o, const json& v) {
  switch (o.type) {
    case OptType::flag:
      if (v.is_boolean()) return v;
      if (v.is_string() && (v == "true" || v == "false")) return v == "true";
      throw UsageError(std::string("config key '") + o.name + "' must be a boolean");
    case OptType::list: {
      json arr = json::array();
      if (v.is_array()) {
        for (const auto& e : v) arr.push_back(scalar_text(e));
      } else {
        arr.push_back(scalar_text(v));
      }
      return arr;
    }
    case OptType::scalar:
      return scalar_text(v);
  }
  return v;
}

// ------------------------------------------------------------ accessors

class Config {
 public:
  Config(std::string cmd, json j) : cmd_(std::move(cmd)), j_(std::move(j)) {}

  const std::string& command() const { return cmd_; }
  bool has(const std::string& key) const { return j_.contains(key); }
  std::string str(const std::string& key) const {
    if (!has(key)) throw UsageError(cmd_ + " needs --" + key);
    return j_.at(key).get<std::string>();
  }
  std::string str_or(const std::string& key, const std::string& def) const { return has(key) ? str(key) : def; }
  std::vector<std::string> list(const std::string& key) const {
    if (!has(key)) return {};
    return j_.at(key).get<std::vector<std::string>>();
  }
  bool flag(const std::string& key) const { return has(key) && j_.at(key).get<bool>(); }
  double real(const std::string& key) const { return parse_real(str(key)); }
  std::int64_t integer(const std::string& key) const { return parse_int64(str(key)); }
  std::uint64_t count(const std::string& key) const {
    auto v = integer(key);
    if (v < 0) throw UsageError("--" + key + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  bool boolean(const std::string& key) const {
    auto s = str(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("--" + key + " expects true or false");
  }
  /// Schedule from --N; every entry positive.
  std::vector<std::uint64_t> schedule() const {
    std::vector<std::uint64_t> out;
    for (const auto& s : list("N")) {
      auto v = parse_int64(s);
      if (v <= 0) throw UsageError("--N values must be positive");
      out.push_back(static_cast<std::uint64_t>(v));
    }
    if (out.empty()) throw UsageError(cmd_ + " needs --N");
    return out;
  }
  std::uint64_t single_N() const {
    auto s = schedule();
    if (s.size() != 1) throw UsageError(cmd_ + " takes a single --N");
    return s.front();
  }

  const json& canonical() const { return j_; }
  std::vector<std::string> header() const { return {"config: " + j_.dump()}; }

 private:
  std::string cmd_;
  json j_;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

void emit(const Io& io, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    io.out << content;
    io.out.flush();
  } else {
    write_output(path, content);
  }
}

TorusSystem system_of(const Config& cfg) { return TorusSystem::parse(cfg.str("system")); }

std::vector<Observable> observables_of(const Config& cfg) {
  std::vector<Observable> fs;
  for (const auto& s : cfg.list("obs")) fs.push_back(Observable::parse(s));
  if (fs.empty()) throw UsageError(cfg.command() + " needs at least one --obs");
  return fs;
}

TorusPoint point_of(const Config& cfg, std::size_t dim) {
  if (cfg.has("point")) {
    auto p = TorusPoint::parse(cfg.str("point"));
    if (p.dim() != dim) throw UsageError("--point has the wrong dimension");
    return p;
  }
  return TorusPoint::from_exact(std::vector<ExactScalar>(dim, ExactScalar::integer(0)));
}

SampleSet samples_of(const Config& cfg, const TorusSystem& sys) {
  const std::uint64_t M = cfg.has("M") ? cfg.count("M") : default_sample_count(sys.dim());
  if (M == 0) throw UsageError("--M must be positive");
  const auto mode = cfg.str("sampling");
  if (mode == "grid") return SampleSet::grid(sys.dim(), M);
  if (mode == "orbit") return SampleSet::orbit(sys, point_of(cfg, sys.dim()), M);
  throw UsageError("--sampling must be grid or orbit");
}

bool names_index_sequence(const std::string& text) {
  static const std::set<std::string> names = {"arith", "beatty", "squarefree", "primes", "beatty_primes", "explicit"};
  return names.contains(parse_spec_text(text).name);
}

/// --weight, or --seq read as a weight (index sequences become indicators).
WeightSequence weight_source(const Config& cfg) {
  if (cfg.has("weight")) return WeightSequence::parse(cfg.str("weight"));
  const auto s = cfg.str("seq");
  if (names_index_sequence(s)) return WeightSequence::indicator(IndexSequence::parse(s));
  return WeightSequence::parse(s);
}

std::string peaks_document(const Config& cfg, const SpectrumScan& scan, const PeakReport& peaks,
                           const std::optional<ContainmentReport>& containment) {
  json j;
  j["config"] = cfg.canonical();
  j["N"] = scan.N;
  j["fft_size"] = scan.fft_size;
  j["peaks"] = peaks_json(peaks);
  if (containment) j["containment"] = containment_json(*containment);
  return j.dump(2) + "\n";
}

// ------------------------------------------------------------ plans

std::string plan_text(const Config& cfg) {
  std::string out = "plan: " + cfg.command() + "\n";
  for (const auto& [k, v] : cfg.canonical().items()) {
    if (k == "command") continue;
    out += "  " + k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  }
  return out;
}

// Parses every spec the command would use, without computing anything.
void validate(const Config& cfg) {
  const char c = command_letter(cfg.command());
  if (cfg.has("system")) (void)system_of(cfg);
  for (const auto& s : cfg.list("obs")) (void)Observable::parse(s);
  if (cfg.has("weight")) (void)WeightSequence::parse(cfg.str("weight"));
  if (cfg.has("seq")) {
    const auto s = cfg.str("seq");
    if (c == 's' || c == 'g') {
      (void)weight_source(cfg);
    } else {
      (void)IndexSequence::parse(s);
    }
  }
  if (cfg.has("N")) (void)cfg.schedule();
  if (cfg.has("sigma-of")) (void)TorusSystem::parse(cfg.str("sigma-of"));
  if (cfg.has("method")) (void)parse_method(cfg.str("method"));
  if (cfg.has("normalization")) (void)parse_normalization(cfg.str("normalization"));
  for (const auto& key : {"tau", "tol", "density"})
    if (cfg.has(key)) (void)cfg.real(key);
  for (const auto& key : {"M", "windows", "oversample", "bound", "s", "hyp-bound", "k", "L", "seed"})
    if (cfg.has(key)) (void)cfg.count(key);
  if (cfg.has("refine")) (void)cfg.boolean("refine");
}

// ------------------------------------------------------------ commands

int cmd_correlate(const Config& cfg, const Io& io) {
  const auto sys = system_of(cfg);
  const auto fs = observables_of(cfg);
  const auto N = cfg.single_N();
  const auto samples = samples_of(cfg, sys);
  const auto method = parse_method(cfg.str("method"));
  if (cfg.has("seq") && cfg.has("weight")) throw UsageError("give --seq or --weight, not both");
  std::string content;
  if (cfg.has("seq")) {
    AlongOptions opts;
    opts.method = method;
    opts.normalization = parse_normalization(cfg.str_or("normalization", "count"));
    auto g = average_along(sys, fs, IndexSequence::parse(cfg.str("seq")), N, samples, opts);
    content = empirical_csv(g, cfg.header());
  } else if (cfg.has("weight")) {
    auto norm = parse_normalization(cfg.str_or("normalization", "cesaro"));
    auto g = average_along(sys, fs, WeightSequence::parse(cfg.str("weight")), N, samples, norm, method);
    content = empirical_csv(g, cfg.header());
  } else {
    if (cfg.has("normalization")) throw UsageError("--normalization applies to --seq or --weight averages");
    if (fs.size() < 2) throw UsageError("correlate needs f0 and at least one more --obs");
    auto series = multicorrelation(sys, fs, N, samples, method);
    content = series_csv(series, cfg.header());
  }
  emit(io, cfg.str_or("out", "-"), content);
  return kExitOk;
}

std::vector<std::complex<double>> orbit_values(const TorusSystem& sys, const Observable& f, const TorusPoint& x,
                                               std::size_t N) {
  std::vector<std::complex<double>> eta(N);
  parallel_for(N, [&](std::size_t i) {
    auto p = sys.iterate(x, static_cast<i128>(i + 1));
    eta[i] = f.evaluate(p.coords);
  });
  return eta;
}

int finish_spectrum(const Config& cfg, const Io& io, const SpectrumScan& scan, const PeakReport& peaks,
                    const std::optional<ContainmentReport>& containment) {
  if (cfg.has("out")) emit(io, cfg.str("out"), scan_csv(scan, cfg.header()));
  emit(io, cfg.str_or("peaks-out", "-"), peaks_document(cfg, scan, peaks, containment));
  return containment && !containment->pass ? kExitTolerance : kExitOk;
}

int cmd_spectrum(const Config& cfg, const Io& io) {
  const auto N = cfg.single_N();
  std::vector<std::complex<double>> eta;
  if (cfg.has("seq") || cfg.has("weight")) {
    if (cfg.has("system") || cfg.has("obs")) throw UsageError("spectrum takes a sequence or a system, not both");
    if (cfg.has("seq") && cfg.has("weight")) throw UsageError("give --seq or --weight, not both");
    eta = weight_source(cfg).values(1, N);
  } else {
    const auto sys = system_of(cfg);
    const auto fs = observables_of(cfg);
    if (fs.size() == 1) {
      eta = orbit_values(sys, fs.front(), point_of(cfg, sys.dim()), N);
    } else {
      eta = multicorrelation(sys, fs, N, samples_of(cfg, sys), parse_method(cfg.str("method"))).values;
    }
  }
  const auto scan = spectrum_scan(eta, cfg.count("oversample"));
  const auto peaks = peak_detect(scan, cfg.real("tau"), cfg.boolean("refine"));
  std::optional<ContainmentReport> containment;
  if (cfg.has("sigma-of")) {
    const auto target = TorusSystem::parse(cfg.str("sigma-of"));
    const auto spectrum = theoretical_spectrum(target, static_cast<int>(cfg.count("bound")));
    const double tol = cfg.has("tol") ? cfg.real("tol") : 2.0 / static_cast<double>(N);
    containment = containment_check(peaks, spectrum, tol);
  } else if (cfg.has("tol")) {
    throw UsageError("--tol applies to --sigma-of containment");
  }
  return finish_spectrum(cfg, io, scan, peaks, containment);
}

std::string gowers_value_text(double v) {
  std::string s = format_real(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

GowersMethod gowers_method_of(const std::string& text) {
  if (text == "auto") return GowersMethod::automatic;
  if (text == "naive") return GowersMethod::naive;
  if (text == "fft") return GowersMethod::fft;
  throw UsageError("--gowers-method must be auto, naive or fft");
}

int cmd_gowers(const Config& cfg, const Io& io) {
  const auto N = cfg.single_N();
  const int s = static_cast<int>(cfg.count("s"));
  if (cfg.has("wtrick")) {
    if (cfg.has("seq") || cfg.has("weight")) throw UsageError("--wtrick builds its own weights");
    WTrickMode mode;
    const auto mode_text = cfg.str("wtrick-mode");
    if (mode_text != "classic") {
      auto spec = parse_spec_text(mode_text);
      if (spec.name != "beatty") throw UsageError("--wtrick-mode must be classic or beatty:theta=..,gamma=..");
      spec.expect_keys({"theta", "gamma"});
      mode.beatty = true;
      mode.theta = ExactScalar::parse(spec.get("theta"));
      mode.gamma = spec.find("gamma") ? ExactScalar::parse(spec.get("gamma")) : ExactScalar::integer(0);
    }
    std::vector<WTrickRow> rows;
    for (const auto& w : cfg.list("wtrick")) {
      auto v = parse_int64(w);
      if (v < 1) throw UsageError("--wtrick values must be positive");
      rows.push_back(w_trick_uniformity(static_cast<std::uint64_t>(v), N, s, mode));
    }
    emit(io, cfg.str_or("out", "-"), wtrick_csv(rows, cfg.header()));
    return kExitOk;
  }
  const auto F = weight_source(cfg).values(1, N);
  const double value = gowers_norm(F, s, gowers_method_of(cfg.str("gowers-method")));
  emit(io, cfg.str_or("out", "-"), gowers_value_text(value) + "\n");
  return kExitOk;
}

std::vector<ExactScalar> parse_generators(const std::string& text) {
  std::vector<ExactScalar> gens;
  for (const auto& g : split_top_level(text, ',')) gens.push_back(ExactScalar::parse(g));
  return gens;
}

// Spectrum generators of a Besicovitch weight, read off its definition.
TheoremSpec besicovitch_theorem(const Config& cfg, const WeightSequence& w) {
  if (cfg.has("phi-spectrum") || cfg.flag("phi-rational")) {
    auto gens = cfg.has("phi-spectrum") ? parse_generators(cfg.str("phi-spectrum")) : std::vector<ExactScalar>{};
    return TheoremSpec::besicovitch(std::move(gens), cfg.flag("phi-rational"));
  }
  if (const auto* t = std::get_if<WeightSequence::TrigPoly>(&w.kind())) return TheoremSpec::besicovitch(t->freqs, false);
  if (const auto* ind = std::get_if<WeightSequence::Indicator>(&w.kind())) {
    const auto& k = ind->sequence.kind();
    if (std::holds_alternative<IndexSequence::Squarefree>(k)) return TheoremSpec::besicovitch({}, true);
    if (const auto* a = std::get_if<IndexSequence::Arithmetic>(&k))
      return TheoremSpec::besicovitch({ExactScalar::rational(1, a->q)}, false);
    if (const auto* b = std::get_if<IndexSequence::Beatty>(&k))
      return TheoremSpec::besicovitch({b->theta.inverse()}, false);
  }
  throw UsageError("cannot infer the spectrum of weight " + w.to_string() + "; give --phi-spectrum or --phi-rational");
}

int report_exit(const ConvergenceReport& report) {
  if (!report.ran) return kExitHypothesis;
  return report.verdict ? kExitOk : kExitTolerance;
}

int cmd_verify(const Config& cfg, const Io& io) {
  const auto sys = system_of(cfg);
  const auto fs = observables_of(cfg);
  const auto schedule = cfg.schedule();
  const auto samples = samples_of(cfg, sys);
  RunOptions opts;
  opts.windows = cfg.count("windows");
  opts.tol = cfg.real("tol");
  opts.force = cfg.flag("force");
  opts.hypothesis_bound = static_cast<int>(cfg.count("hyp-bound"));
  opts.method = parse_method(cfg.str("method"));
  if (opts.windows == 0) throw UsageError("--windows must be positive");

  if (cfg.flag("transfer")) {
    if (cfg.has("seq") || cfg.has("weight")) throw UsageError("--transfer compares primes with von Mangoldt weights");
    const auto N = schedule.back();
    const auto gap = prime_transfer_gap(sys, fs, N, samples, opts.method);
    const bool pass = gap.sup < opts.tol;
    json j;
    j["config"] = cfg.canonical();
    j["N"] = N;
    j["sup"] = gap.sup;
    j["l2"] = gap.l2;
    j["tol"] = opts.tol;
    j["verdict"] = pass ? "pass" : "fail";
    io.out << "transfer gap at N=" << N << ": sup " << format_real(gap.sup) << ", L2 " << format_real(gap.l2)
           << " -> " << (pass ? "pass" : "fail") << "\n";
    if (cfg.has("out")) emit(io, cfg.str("out"), j.dump(2) + "\n");
    return pass ? kExitOk : kExitTolerance;
  }

  ConvergenceReport report;
  if (cfg.has("seq") && cfg.has("weight")) throw UsageError("give --seq or --weight, not both");
  if (cfg.has("seq")) {
    const auto seq = IndexSequence::parse(cfg.str("seq"));
    report = run_theorem(sys, fs, TheoremSpec::along(seq), schedule, samples, opts);
  } else if (cfg.has("weight")) {
    const auto w = WeightSequence::parse(cfg.str("weight"));
    report = besicovitch_weight_run(sys, fs, w, besicovitch_theorem(cfg, w), schedule, samples, opts);
  } else {
    throw UsageError("verify needs --seq or --weight");
  }

  io.out << report_text(report);
  if (!report.hypothesis.pass && report.hypothesis.witness)
    io.out << "witness " << report.hypothesis.witness->to_string() << "\n";
  if (cfg.has("out")) {
    auto j = report_json(report);
    j["config"] = cfg.canonical();
    emit(io, cfg.str("out"), j.dump(2) + "\n");
  }
  if (cfg.has("csv")) emit(io, cfg.str("csv"), convergence_csv(report, cfg.header()));
  return report_exit(report);
}

std::vector<bool> random_set(std::uint64_t L, double density, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<bool> in(L + 1, false);
  for (std::uint64_t x = 1; x <= L; ++x) in[x] = static_cast<double>(gen() >> 11) * 0x1.0p-53 < density;
  return in;
}

std::vector<bool> set_from_file(const std::string& path) {
  std::string text = slurp(path);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<std::int64_t> xs;
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    auto v = parse_int64(tok);
    if (v < 1) throw UsageError("set elements must be positive integers");
    xs.push_back(v);
  }
  if (xs.empty()) throw UsageError("set file '" + path + "' is empty");
  std::vector<bool> mark(static_cast<std::size_t>(*std::max_element(xs.begin(), xs.end())) + 1, false);
  for (auto v : xs) mark[static_cast<std::size_t>(v)] = true;
  return mark;
}

int cmd_search(const Config& cfg, const Io& io) {
  const auto seq = IndexSequence::parse(cfg.str("seq"));
  const auto* b = std::get_if<IndexSequence::Beatty>(&seq.kind());
  if (b == nullptr) throw UsageError("search needs a Beatty sequence, e.g. beatty:theta=sqrt(2),gamma=0");
  const int k = static_cast<int>(cfg.count("k"));
  std::vector<bool> in;
  if (cfg.has("set")) {
    in = set_from_file(cfg.str("set"));
  } else {
    const double density = cfg.real("density");
    if (density < 0.0 || density > 1.0) throw UsageError("--density must lie in [0, 1]");
    in = random_set(cfg.count("L"), density, cfg.count("seed"));
  }
  const auto size = static_cast<std::int64_t>(std::count(in.begin(), in.end(), true));
  const auto hit = beatty_ap_search(in, b->theta, b->gamma, k);

  json j;
  j["config"] = cfg.canonical();
  j["set_size"] = size;
  j["universe"] = in.empty() ? 0 : in.size() - 1;
  if (hit) {
    bool ok = seq.contains(hit->d);
    json terms = json::array();
    for (int i = 0; i <= k; ++i) {
      const std::int64_t x = hit->m + i * hit->d;
      terms.push_back(x);
      ok = ok && x >= 1 && x < static_cast<std::int64_t>(in.size()) && in[static_cast<std::size_t>(x)];
    }
    j["found"] = true;
    j["m"] = hit->m;
    j["d"] = hit->d;
    j["terms"] = terms;
    j["verified"] = ok;
    emit(io, cfg.str_or("out", "-"), j.dump(2) + "\n");
    return ok ? kExitOk : kExitTolerance;
  }
  j["found"] = false;
  emit(io, cfg.str_or("out", "-"), j.dump(2) + "\n");
  return kExitTolerance;
}

int cmd_orbit_spectrum(const Config& cfg, const Io& io) {
  const auto sys = system_of(cfg);
  const auto fs = observables_of(cfg);
  if (fs.size() != 1) throw UsageError("orbit-spectrum takes exactly one --obs");
  const auto N = cfg.single_N();
  const int k = static_cast<int>(cfg.count("k"));
  auto result = diagonal_orbit_spectrum(sys, point_of(cfg, sys.dim()), k, fs.front(), N, cfg.real("tau"),
                                        cfg.count("oversample"));
  if (!cfg.boolean("refine")) result.peaks = peak_detect(result.scan, cfg.real("tau"), false);
  return finish_spectrum(cfg, io, result.scan, result.peaks, std::nullopt);
}

int dispatch(const Config& cfg, const Io& io) {
  switch (command_letter(cfg.command())) {
    case 'c': return cmd_correlate(cfg, io);
    case 's': return cmd_spectrum(cfg, io);
    case 'g': return cmd_gowers(cfg, io);
    case 'v': return cmd_verify(cfg, io);
    case 'r': return cmd_search(cfg, io);
    case 'o': return cmd_orbit_spectrum(cfg, io);
    default: throw UsageError("unknown command " + cfg.command());
  }
}

// ------------------------------------------------------------ parsing

std::optional<std::string> config_argument(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  Io io{out, err};
  std::vector<std::string> args = args_in;
  try {
    // The command may come from the config when none is given.
    json file_cfg = json::object();
    if (auto path = config_argument(args)) file_cfg = load_config(*path);
    std::string command;
    if (!args.empty() && command_letter(args.front()) != 0) {
      command = args.front();
    } else if (file_cfg.contains("command")) {
      command = scalar_text(file_cfg["command"]);
      if (command_letter(command) == 0) throw UsageError("unknown command '" + command + "' in config");
      args.insert(args.begin(), command);
    }
    if (file_cfg.contains("command") && scalar_text(file_cfg["command"]) != command && !command.empty())
      throw UsageError("config is for command '" + scalar_text(file_cfg["command"]) + "'");

    CLI::App app{"Multiple ergodic averages along sequences, spectra and Gowers norms on tori"};
    app.require_subcommand(1);
    std::map<std::string, std::string> scalars;
    std::map<std::string, std::vector<std::string>> lists;
    std::map<std::string, bool> flags;
    std::map<std::string, std::map<std::string, CLI::Option*>> handles;
    std::string config_path;
    unsigned threads = 0;
    bool dry_run = false;
    std::map<std::string, CLI::Option*> threads_opt;

    for (const auto& [name, letter] : commands()) {
      auto* sub = app.add_subcommand(name);
      for (const auto& o : option_table()) {
        if (!option_applies(o, letter)) continue;
        const std::string flag = std::string("--") + o.name;
        const std::string key = name + "/" + o.name;
        CLI::Option* opt = nullptr;
        switch (o.type) {
          case OptType::scalar:
            opt = sub->add_option(flag, scalars[key], o.help);
            break;
          case OptType::list:
            opt = sub->add_option(flag, lists[key], o.help);
            if (std::string(o.name) != "obs") opt->delimiter(',');
            break;
          case OptType::flag:
            opt = sub->add_flag(flag, flags[key], o.help);
            break;
        }
        handles[name][o.name] = opt;
      }
      sub->add_option("--config", config_path, "config JSON, or a file carrying a '# config:' header");
      threads_opt[name] = sub->add_option("--threads", threads, "worker threads");
      sub->add_flag("--dry-run", dry_run, "validate and print the plan without computing");
    }

    try {
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? kExitOk : kExitParse;
    }

    const char letter = command_letter(command);
    json merged = defaults_for(command);
    for (const auto& [key, value] : file_cfg.items()) {
      if (key == "command") continue;
      const auto* def = find_option(key);
      if (def == nullptr) throw UsageError("unknown config key '" + key + "'");
      if (!option_applies(*def, letter)) throw UsageError("config key '" + key + "' does not apply to " + command);
      merged[key] = normalize_value(*def, value);
    }
    for (const auto& [key, opt] : handles[command]) {
      if (opt->count() == 0) continue;
      const auto* def = find_option(key);
      const std::string slot = command + "/" + key;
      switch (def->type) {
        case OptType::scalar: merged[key] = scalars[slot]; break;
        case OptType::list: merged[key] = lists[slot]; break;
        case OptType::flag: merged[key] = flags[slot]; break;
      }
    }
    merged["command"] = command;
    Config cfg(command, merged);
    err << "config: " << merged.dump() << "\n";

    if (threads_opt[command]->count() > 0) {
      if (threads == 0) throw UsageError("--threads must be positive");
      set_thread_count(threads);
    }

    validate(cfg);
    if (dry_run) {
      out << plan_text(cfg);
      return kExitOk;
    }
    return dispatch(cfg, io);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
}

}  // namespace ergolab
