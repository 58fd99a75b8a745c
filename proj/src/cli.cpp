#include "lbpscreen/cli.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lbpscreen/dataset.hpp"
#include "lbpscreen/evaluation.hpp"
#include "lbpscreen/text_io.hpp"

namespace lbpscreen::cli {

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error: unknown or missing flag, invalid flag combination\n"
    "  2  unreadable input file or unwritable output\n"
    "  3  invalid manifest or image data\n"
    "  4  data unusable for evaluation (e.g. a fold with a single-class training set)\n"
    "  5  internal error";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string manifest;
  std::string group = "all";
  std::string kind = "lbp";
  int width = 0;
  int height = 0;
  std::string comparator = "gt";
  double c = 1000.0;
  int max_iter = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  bool decimal_comma = false;
  bool raw_counts = false;
  unsigned jobs = 1;
  std::string resolutions;
  int per_class = 20;
  int radius = 2;
};

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--manifest", o.manifest, "Manifest CSV (id,path,label,group)")->required();
  cmd->add_option("--group", o.group, "Restrict to one group")
      ->check(CLI::IsMember({"1", "2", "all"}))
      ->capture_default_str();
  cmd->add_option("--comparator", o.comparator, "LBP tie rule: gt (neighbor > center) or ge")
      ->check(CLI::IsMember({"gt", "ge"}))
      ->capture_default_str();
  cmd->add_flag("--raw-counts", o.raw_counts, "Use raw histogram counts instead of L1-normalized ones");
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--c", o.c, "C-SVC penalty")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "Maximum solver passes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", o.tol, "KKT violation tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads for folds (output does not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

CLI::Option* add_format_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  return cmd->add_flag("--decimal-comma", o.decimal_comma, "Render percents as 96,6% (json only)");
}

void add_seed_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Seed for all randomness")->capture_default_str();
}

std::filesystem::path manifest_dir(const std::string& manifest) {
  const auto parent = std::filesystem::path(manifest).parent_path();
  return parent.empty() ? std::filesystem::path(".") : parent;
}

Manifest read_manifest(const Options& o) {
  const auto bytes = read_file(o.manifest);
  auto m = load_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  if (o.group != "all") m = filter_group(m, std::stoi(o.group));
  return m;
}

FeatureOptions feature_options(const Options& o) {
  return {o.comparator == "ge" ? Comparator::GreaterEqual : Comparator::StrictGreater,
          o.raw_counts ? Normalization::RawCounts : Normalization::L1};
}

EvalOptions eval_options(const Options& o) {
  EvalOptions e;
  e.features = feature_options(o);
  e.solver = {o.c, o.max_iter, o.tol};
  e.jobs = o.jobs;
  return e;
}

Resolution target_resolution(const Options& o) {
  if ((o.width == 0) != (o.height == 0)) throw UsageError("--width and --height must be given together");
  Resolution r = o.width == 0 ? Resolution{300, 225} : Resolution{o.width, o.height};
  if (r.width < 3 || r.height < 3) throw UsageError("resolution must be at least 3x3");
  return r;
}

std::vector<Resolution> parse_resolutions(const std::string& spec) {
  std::vector<Resolution> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(item);
      std::size_t used_w = 0;
      std::size_t used_h = 0;
      const std::string ws = item.substr(0, x);
      const std::string hs = item.substr(x + 1);
      const int w = std::stoi(ws, &used_w);
      const int h = std::stoi(hs, &used_h);
      if (used_w != ws.size() || used_h != hs.size() || w < 3 || h < 3) throw std::invalid_argument(item);
      out.push_back({w, h});
    } catch (const std::exception&) {
      throw UsageError("invalid resolution '" + item + "' (expected WxH, each at least 3)");
    }
  }
  if (out.empty()) throw UsageError("--resolutions must list at least one WxH pair");
  return out;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  write_file(o.out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void check_format_flags(const Options& o) {
  if (o.decimal_comma && o.format != "json") {
    throw UsageError("--decimal-comma only applies to --format json");
  }
}

void run_extract(const Options& o, std::ostream& out) {
  const auto m = read_manifest(o);
  const auto data = load_images(m, manifest_dir(o.manifest));
  const auto target = target_resolution(o);
  const auto kind = parse_feature_kind(o.kind);
  const auto fopts = feature_options(o);

  std::string text;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& e : data.entries) {
    const auto fv = extract_features(resize_bilinear(e.image, target), kind, fopts);
    if (o.format == "table") {
      text += serialize(fv) + '\n';
    } else {
      std::vector<double> values(fv.values.data(), fv.values.data() + fv.size());
      rows.push_back({{"id", e.id}, {"kind", std::string(to_string(fv.kind))}, {"values", values}});
    }
  }
  if (o.format == "json") text = rows.dump(2) + "\n";
  emit(o, text, out);
}

void run_loocv(const Options& o, std::ostream& out) {
  check_format_flags(o);
  const auto target = target_resolution(o);
  const auto kind = parse_feature_kind(o.kind);
  const auto data = load_images(read_manifest(o), manifest_dir(o.manifest));
  const auto report = loocv(data, kind, target, eval_options(o));
  emit(o, o.format == "json" ? to_json(report, o.decimal_comma) : to_table(report), out);
}

void run_sweep(const Options& o, std::ostream& out) {
  check_format_flags(o);
  const auto grid = o.resolutions.empty() ? default_sweep_grid() : parse_resolutions(o.resolutions);
  const auto data = load_images(read_manifest(o), manifest_dir(o.manifest));
  const auto report = resolution_sweep(data, grid, eval_options(o));
  emit(o, o.format == "json" ? to_json(report, o.decimal_comma) : to_table(report), out);
}

void run_synth(const Options& o, std::ostream& out) {
  SyntheticSpec spec;
  spec.seed = o.seed;
  spec.per_class = o.per_class;
  spec.width = o.width == 0 ? 64 : o.width;
  spec.height = o.height == 0 ? 48 : o.height;
  spec.smoothing_radius = o.radius;
  if ((o.width == 0) != (o.height == 0)) throw UsageError("--width and --height must be given together");
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto synth = generate_synthetic(spec);
  const std::filesystem::path dir(o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + o.out + "': " + ec.message());
  for (std::size_t k = 0; k < synth.images.size(); ++k) {
    write_file((dir / synth.manifest.entries[k].path).string(), encode_pgm(synth.images[k]));
  }
  const auto manifest = serialize(synth.manifest);
  write_file((dir / "manifest.csv").string(),
             std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
  out << "wrote " << synth.images.size() << " images and manifest.csv to " << o.out << "\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Texture screening with LBP histograms, a linear C-SVC and leave-one-out evaluation",
               "lbp-screen"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "Write one feature vector per manifest entry");
  add_data_flags(extract, o);
  extract->add_option("--kind", o.kind, "Feature kind")
      ->check(CLI::IsMember({"lbp", "gray", "concat"}))
      ->capture_default_str();
  extract->add_option("--width", o.width, "Resize width (default 300)");
  extract->add_option("--height", o.height, "Resize height (default 225)");
  extract->add_option("--format", o.format, "json, or table for `kind,v0,v1,...` lines")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  auto* loocv_cmd = app.add_subcommand("loocv", "Leave-one-out evaluation for one feature kind");
  add_data_flags(loocv_cmd, o);
  add_solver_flags(loocv_cmd, o);
  add_format_flags(loocv_cmd, o);
  loocv_cmd->add_option("--kind", o.kind, "Feature kind")
      ->check(CLI::IsMember({"lbp", "gray", "concat"}))
      ->capture_default_str();
  loocv_cmd->add_option("--width", o.width, "Resize width (default 300)");
  loocv_cmd->add_option("--height", o.height, "Resize height (default 225)");

  auto* sweep = app.add_subcommand("sweep", "Leave-one-out accuracy of all feature kinds per resolution");
  add_data_flags(sweep, o);
  add_solver_flags(sweep, o);
  add_format_flags(sweep, o);
  sweep->add_option("--resolutions", o.resolutions,
                    "Comma-separated WxH list (default: 50x37,75x56,...,300x225)");

  auto* synth = app.add_subcommand("synth", "Generate the seeded synthetic benchmark");
  add_seed_flag(synth, o);
  synth->add_option("--per-class", o.per_class, "Images per class")->capture_default_str();
  synth->add_option("--width", o.width, "Image width (default 64)");
  synth->add_option("--height", o.height, "Image height (default 48)");
  synth->add_option("--radius", o.radius, "Box blur radius")->capture_default_str();
  synth->add_option("--out", o.out, "Output directory")->required();

  for (auto* cmd : {extract, loocv_cmd, sweep}) {
    cmd->add_option("--seed", o.seed, "Accepted for uniformity; these commands draw no random numbers");
  }

  std::vector<const char*> argv{"lbp-screen"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*extract) run_extract(o, out);
    if (*loocv_cmd) run_loocv(o, out);
    if (*sweep) run_sweep(o, out);
    if (*synth) run_synth(o, out);
  } catch (const UsageError& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kUnreadable;
  } catch (const ManifestError& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ImageFormatError& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "lbp-screen: error: " << e.what() << "\n";
    return kEvaluation;
  } catch (const std::exception& e) {
    err << "lbp-screen: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace lbpscreen::cli
