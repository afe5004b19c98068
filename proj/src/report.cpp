#include "driftscope/report.hpp"

#include "driftscope/csv.hpp"
#include "driftscope/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace driftscope {

using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCurveHeader = {"dataset",     "split",      "kernel",
                                               "bandwidth",   "re_train_nu", "re_test_nu",
                                               "re_train_u",  "re_test_u"};

std::string opt(const std::optional<double>& v)
{
  return v ? csv::format_double(*v) : std::string();
}

double parse_double(const std::string& s, std::size_t line)
{
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("curves.csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::optional<double> parse_opt(const std::string& s, std::size_t line)
{
  if (s.empty())
    return std::nullopt;
  return parse_double(s, line);
}

ordered_json json_opt(const std::optional<double>& v)
{
  if (!v || !std::isfinite(*v))
    return nullptr;
  return *v;
}

} // namespace

std::vector<CurveRow> curve_rows(const SweepResult& sweep)
{
  std::vector<CurveRow> rows;
  rows.reserve(sweep.cells.size());
  for (const auto& c : sweep.cells) {
    rows.push_back({sweep.dataset, c.split, c.kernel, c.bandwidth, c.re_train_nu, c.re_test_nu,
                    c.re_train_u, c.re_test_u});
  }
  return rows;
}

void write_curves_csv(const SweepResult& sweep, std::ostream& out)
{
  csv::write_row(out, kCurveHeader);
  for (const auto& r : curve_rows(sweep)) {
    csv::write_row(out,
                   {r.dataset, std::to_string(r.split), to_string(r.kernel),
                    csv::format_double(r.bandwidth), csv::format_double(r.re_train_nu),
                    opt(r.re_test_nu), csv::format_double(r.re_train_u), opt(r.re_test_u)});
  }
}

std::vector<CurveRow> read_curves_csv(std::istream& in)
{
  const auto table = csv::read(in);
  if (table.header != kCurveHeader)
    throw ValidationError("not a curves.csv file: unexpected header");
  std::vector<CurveRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    const auto line = i + 2;
    CurveRow r;
    r.dataset = f[0];
    r.split = static_cast<int>(parse_double(f[1], line));
    r.kernel = parse_kernel(f[2]);
    r.bandwidth = parse_double(f[3], line);
    r.re_train_nu = parse_double(f[4], line);
    r.re_test_nu = parse_opt(f[5], line);
    r.re_train_u = parse_double(f[6], line);
    r.re_test_u = parse_opt(f[7], line);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string sha256_hex(std::string_view bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

ordered_json to_json(const AnalysisConfig& c)
{
  ordered_json j;
  j["epsilon"] = c.epsilon;
  j["theta"] = c.theta;
  j["grid"] = {{"lo", c.grid_lo}, {"hi", c.grid_hi}, {"step", c.grid_step}};
  j["kernels"] = ordered_json::array();
  for (auto k : c.kernels)
    j["kernels"].push_back(to_string(k));
  j["all_data_target"] = c.all_data_target == AllDataTarget::LastPeriod ? "last" : "next";
  j["normality_alpha"] = c.normality_alpha;
  if (c.overrides)
    j["overrides"] = *c.overrides;
  return j;
}

std::string utc_timestamp()
{
  using namespace std::chrono;
  sys_seconds now = floor<seconds>(system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(epoch, epoch + std::char_traits<char>::length(epoch), v);
    if (ec == std::errc{})
      now = sys_seconds{seconds{v}};
  }
  const auto day = floor<days>(now);
  const year_month_day ymd{day};
  const hh_mm_ss hms{now - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

ordered_json RunManifest::to_json() const
{
  ordered_json j;
  j["tool_version"] = tool_version;
  j["descriptor_digest"] = descriptor_digest;
  j["input_digest"] = input_digest;
  j["config"] = config;
  if (!timestamp.empty())
    j["timestamp"] = timestamp;
  return j;
}

ordered_json verdicts_json(const SweepResult& sweep, const Summary& summary, const RunManifest& manifest)
{
  ordered_json j;
  auto m = manifest.to_json();
  m.erase("timestamp");
  j["manifest"] = m;
  j["dataset"] = sweep.dataset;
  j["overall"] = to_string(summary.overall);

  j["splits"] = ordered_json::array();
  for (const auto& s : sweep.splits) {
    ordered_json sj;
    sj["split"] = s.ordinal;
    sj["train_size"] = s.train_size;
    sj["test_size"] = s.test_size;
    sj["train_through"] = s.train_through;
    sj["test_period"] = s.test_period;
    sj["target_period"] = s.target;
    sj["train_span"] = s.train_span;
    sj["normality"] = ordered_json::array();
    for (const auto& n : s.normality) {
      sj["normality"].push_back({{"variable", n.variable},
                                 {"w", n.report.w},
                                 {"p", n.report.p},
                                 {"n", n.report.n},
                                 {"normal", n.report.normal}});
    }
    j["splits"].push_back(sj);
  }

  ordered_json verdicts = ordered_json::object();
  for (const auto& v : summary.verdicts) {
    ordered_json vj;
    vj["split"] = v.split;
    vj["kernel"] = to_string(v.kernel);
    vj["classification"] = to_string(v.classification);
    vj["b_star"] = v.convergence ? ordered_json(v.convergence->bandwidth) : ordered_json(nullptr);
    vj["sustained"] = v.convergence ? v.convergence->sustained : false;
    vj["approach"] = json_opt(v.approach);
    vj["horizon"] = json_opt(v.horizon);
    vj["span"] = v.train_span;
    vj["epsilon"] = v.epsilon;
    vj["theta"] = v.theta;
    verdicts[std::to_string(v.split) + ":" + to_string(v.kernel)] = vj;
  }
  j["verdicts"] = verdicts;

  j["kernel_agreement"] = {{"rate", summary.agreement_rate}, {"splits", ordered_json::array()}};
  for (const auto& a : summary.agreement) {
    ordered_json aj{{"split", a.split}, {"common_lo", a.common_lo}, {"agree", a.agree}};
    for (const auto& [k, c] : a.verdicts)
      aj["verdicts"][to_string(k)] = to_string(c);
    j["kernel_agreement"]["splits"].push_back(aj);
  }

  j["error_ranges"] = ordered_json::array();
  for (const auto& r : summary.ranges) {
    j["error_ranges"].push_back({{"split", r.split},
                                 {"kernel", to_string(r.kernel)},
                                 {"min_train_nu", r.min_train_nu},
                                 {"max_train_nu", r.max_train_nu},
                                 {"train_u", r.train_u},
                                 {"min_test_nu", json_opt(r.min_test_nu)},
                                 {"max_test_nu", json_opt(r.max_test_nu)},
                                 {"test_u", json_opt(r.test_u)}});
  }
  return j;
}

std::string render_svg(const std::vector<CurveRow>& rows, int split, KernelKind kernel)
{
  std::vector<const CurveRow*> slice;
  for (const auto& r : rows) {
    if (r.split == split && r.kernel == kernel)
      slice.push_back(&r);
  }
  if (slice.empty()) {
    throw ValidationError("no curve rows for split " + std::to_string(split) + ", kernel " +
                          to_string(kernel));
  }
  std::sort(slice.begin(), slice.end(),
            [](const CurveRow* a, const CurveRow* b) { return a->bandwidth < b->bandwidth; });

  struct Series
  {
    const char* label;
    const char* color;
    const char* dash;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series = {{"train", "#1f77b4", "", {}},
                                {"test", "#d62728", "", {}},
                                {"train global", "#1f77b4", "6,4", {}},
                                {"test global", "#d62728", "6,4", {}}};
  for (const auto* r : slice) {
    series[0].points.emplace_back(r->bandwidth, r->re_train_nu);
    if (r->re_test_nu)
      series[1].points.emplace_back(r->bandwidth, *r->re_test_nu);
    series[2].points.emplace_back(r->bandwidth, r->re_train_u);
    if (r->re_test_u)
      series[3].points.emplace_back(r->bandwidth, *r->re_test_u);
  }

  double xmin = slice.front()->bandwidth;
  double xmax = slice.back()->bandwidth;
  if (xmax <= xmin)
    xmax = xmin + 1.0;
  double ymax = 0.0;
  for (const auto& s : series) {
    for (const auto& [_, y] : s.points)
      ymax = std::max(ymax, y);
  }
  ymax = ymax > 0 ? ymax * 1.05 : 1.0;

  constexpr double W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - y / ymax * (H - T - B); };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << slice.front()->dataset
      << " split " << split << " (" << to_string(kernel) << ")</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\">bandwidth</text>\n"
      << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\" text-anchor=\"middle\">relative error</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = ymax * i / 4.0;
    const double x = xmin + (xmax - xmin) * i / 4.0;
    svg << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << y
        << "</text>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  double legend_y = T + 10;
  for (const auto& s : series) {
    if (s.points.empty())
      continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (*s.dash)
      svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << " points=\"";
    for (const auto& [x, y] : s.points)
      svg << px(x) << ',' << py(y) << ' ';
    svg << "\"><title>" << s.label << "</title></polyline>\n";
    svg << "<line x1=\"" << W - R + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << W - R + 40
        << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (*s.dash)
      svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << "/>\n<text x=\"" << W - R + 46 << "\" y=\"" << legend_y + 4 << "\">" << s.label
        << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents)
{
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ValidationError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
      throw ValidationError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

} // namespace driftscope
