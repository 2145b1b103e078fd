#include "numsig/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "numsig/consensus.hpp"
#include "numsig/csv.hpp"
#include "numsig/frontier.hpp"

namespace numsig {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 460;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 32;
constexpr int kMarginBottom = 56;

const char* kWordPalette[12] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
                                "#ccb974", "#64b5cd", "#2f4b7c", "#ffa600"};

struct LinearScale {
  double lo = 0.0, hi = 1.0;
  double px_lo = 0.0, px_hi = 1.0;
  double operator()(double v) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

std::string px(double v) { return fmt_g(v, 6); }

class SvgWriter {
 public:
  SvgWriter() {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
          << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            const std::string& extra = "") {
    body_ << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
          << "\" y2=\"" << px(y2) << "\" stroke=\"" << stroke << "\" " << extra << "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                const std::string& extra = "") {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" " << extra << " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ << ' ';
      body_ << px(pts[i].first) << ',' << px(pts[i].second);
    }
    body_ << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill,
              const std::string& extra = "") {
    body_ << "<circle cx=\"" << px(x) << "\" cy=\"" << px(y) << "\" r=\"" << px(r)
          << "\" fill=\"" << fill << "\" " << extra << "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "") {
    body_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
          << "\" height=\"" << px(h) << "\" fill=\"" << fill << "\" " << extra << "/>\n";
  }

  void rect_titled(double x, double y, double w, double h, const std::string& fill,
                   const std::string& title) {
    body_ << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
          << "\" height=\"" << px(h) << "\" fill=\"" << fill << "\" stroke=\"black\"><title>"
          << title << "</title></rect>\n";
  }

  void text(double x, double y, const std::string& content, const std::string& extra = "") {
    body_ << "<text x=\"" << px(x) << "\" y=\"" << px(y)
          << "\" font-family=\"sans-serif\" font-size=\"12\" " << extra << ">" << content
          << "</text>\n";
  }

  void save(const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << body_.str() << "</svg>\n";
  }

 private:
  std::ostringstream body_;
};

void draw_axes(SvgWriter& svg, const LinearScale& x, const LinearScale& y,
               const std::string& x_label, const std::string& y_label, double x_tick,
               double y_tick) {
  svg.line(x.px_lo, y.px_lo, x.px_hi, y.px_lo, "black");
  svg.line(x.px_lo, y.px_lo, x.px_lo, y.px_hi, "black");
  for (double v = std::ceil(x.lo / x_tick) * x_tick; v <= x.hi + 1e-9; v += x_tick) {
    svg.line(x(v), y.px_lo, x(v), y.px_lo + 4, "black");
    svg.text(x(v), y.px_lo + 18, fmt_g(v, 6), "text-anchor=\"middle\"");
  }
  for (double v = std::ceil(y.lo / y_tick) * y_tick; v <= y.hi + 1e-9; v += y_tick) {
    svg.line(x.px_lo - 4, y(v), x.px_lo, y(v), "black");
    svg.text(x.px_lo - 8, y(v) + 4, fmt_g(v, 6), "text-anchor=\"end\"");
  }
  svg.text((x.px_lo + x.px_hi) / 2, kHeight - 16, x_label, "text-anchor=\"middle\"");
  svg.text(16, (y.px_lo + y.px_hi) / 2, y_label,
           "text-anchor=\"middle\" transform=\"rotate(-90 16 " +
               px((y.px_lo + y.px_hi) / 2) + ")\"");
}

void require_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error("plot: missing table " + path.string());
  }
}

std::filesystem::path plot_cost_frontier(const std::filesystem::path& dir,
                                         const PlotOptions& options) {
  const std::filesystem::path results_path = dir / "results.csv";
  require_table(results_path);
  const std::vector<ResultRow> results = read_results_csv(results_path);

  std::vector<EnvelopeRow> exact_env, approx_env;
  if (std::filesystem::exists(dir / "envelope_exact.csv")) {
    exact_env = read_envelope_csv(dir / "envelope_exact.csv");
  }
  if (std::filesystem::exists(dir / "envelope_approx.csv")) {
    approx_env = read_envelope_csv(dir / "envelope_approx.csv");
  }

  double max_terms = 1.0, max_cost = 1.0;
  for (const auto& r : results) {
    max_terms = std::max(max_terms, static_cast<double>(r.terms));
    max_cost = std::max(max_cost, r.cost_bits);
  }
  for (const auto* env : {&exact_env, &approx_env}) {
    for (const auto& row : *env) {
      max_terms = std::max(max_terms, static_cast<double>(row.terms));
      max_cost = std::max(max_cost, row.worst_cost);
    }
  }
  if (options.human_costs) {
    for (const auto& h : *options.human_costs) {
      max_terms = std::max(max_terms, static_cast<double>(h.terms));
      max_cost = std::max(max_cost, h.cost_bits);
    }
  }

  LinearScale x{0.5, max_terms + 0.5, kMarginLeft, kWidth - kMarginRight};
  LinearScale y{0.0, max_cost * 1.08 + 1e-9, kHeight - kMarginBottom, kMarginTop};

  SvgWriter svg;
  draw_axes(svg, x, y, "terms", "communication cost (bits)", 1.0,
            max_cost > 4.0 ? 1.0 : 0.5);

  auto draw_envelope = [&](const std::vector<EnvelopeRow>& env, const std::string& color) {
    std::vector<std::pair<double, double>> best, worst;
    for (const auto& row : env) {
      best.emplace_back(x(row.terms), y(row.best_cost));
      worst.emplace_back(x(row.terms), y(row.worst_cost));
    }
    svg.polyline(best, color, "stroke-width=\"1.5\"");
    svg.polyline(worst, color, "stroke-width=\"1.5\" stroke-dasharray=\"5,3\"");
  };
  draw_envelope(exact_env, "#444444");
  draw_envelope(approx_env, "#9467bd");

  for (const auto& r : results) {
    svg.circle(x(r.terms), y(r.cost_bits), 3.0,
               r.kind == SystemKind::kExact ? "#4c72b0" : "#dd8452", "fill-opacity=\"0.55\"");
  }
  if (options.human_costs) {
    for (const auto& h : *options.human_costs) {
      svg.rect_titled(x(h.terms) - 4, y(h.cost_bits) - 4, 8, 8, "#2ca02c", h.language);
    }
  }

  double ly = kMarginTop + 4;
  svg.circle(kWidth - 170, ly, 3.0, "#4c72b0");
  svg.text(kWidth - 160, ly + 4, "pair (exact)");
  ly += 16;
  svg.circle(kWidth - 170, ly, 3.0, "#dd8452");
  svg.text(kWidth - 160, ly + 4, "pair (approximate)");
  ly += 16;
  if (!exact_env.empty()) {
    svg.line(kWidth - 176, ly, kWidth - 164, ly, "#444444");
    svg.text(kWidth - 160, ly + 4, "exact envelope");
    ly += 16;
  }
  if (!approx_env.empty()) {
    svg.line(kWidth - 176, ly, kWidth - 164, ly, "#9467bd");
    svg.text(kWidth - 160, ly + 4, "approx envelope");
    ly += 16;
  }
  if (options.human_costs) {
    svg.rect(kWidth - 174, ly - 4, 8, 8, "#2ca02c", "stroke=\"black\"");
    svg.text(kWidth - 160, ly + 4, "human system");
  }

  const std::filesystem::path out = dir / "fig_cost_frontier.svg";
  svg.save(out);
  return out;
}

std::filesystem::path plot_term_frequency(const std::filesystem::path& dir) {
  const std::filesystem::path hist_path = dir / "term_histogram.csv";
  require_table(hist_path);

  std::map<int, double> freq;
  for (const std::string& row : read_data_lines(hist_path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 3) throw std::runtime_error("term histogram csv: expected 3 columns");
    if (trim(fields[0]) == "terms") continue;
    freq[parse_int(fields[0], "term histogram")] = parse_double(fields[2], "term histogram");
  }

  int max_terms = 1;
  double max_freq = 0.0;
  for (const auto& [terms, f] : freq) {
    max_terms = std::max(max_terms, terms);
    max_freq = std::max(max_freq, f);
  }

  LinearScale x{0.5, max_terms + 0.5, kMarginLeft, kWidth - kMarginRight};
  LinearScale y{0.0, std::max(max_freq * 1.15, 0.1), kHeight - kMarginBottom, kMarginTop};
  SvgWriter svg;
  draw_axes(svg, x, y, "terms used", "fraction of pairs", 1.0,
            std::max(max_freq * 1.15, 0.1) > 0.5 ? 0.1 : 0.05);

  const double bar = (x(1.5) - x(0.5)) * 0.8;
  for (const auto& [terms, f] : freq) {
    svg.rect(x(terms) - bar / 2, y(f), bar, y(0.0) - y(f), "#4c72b0");
  }

  const std::filesystem::path out = dir / "fig_term_frequency.svg";
  svg.save(out);
  return out;
}

std::filesystem::path plot_consensus(const std::filesystem::path& dir) {
  const std::filesystem::path consensus_path = dir / "consensus.csv";
  require_table(consensus_path);

  // terms -> assignment over the line, rebuilt directly from the csv.
  std::map<int, std::vector<std::pair<int, int>>> strips;
  for (const std::string& row : read_data_lines(consensus_path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 3) throw std::runtime_error("consensus csv: expected 3 columns");
    if (trim(fields[0]) == "terms") continue;
    strips[parse_int(fields[0], "consensus csv")].emplace_back(
        parse_int(fields[1], "consensus csv"), parse_int(fields[2], "consensus csv"));
  }

  SvgWriter svg;
  svg.text(kMarginLeft, 20, "consensus systems (one strip per term count)");
  const double strip_h = 22.0;
  const double gap = 12.0;
  double top = kMarginTop + 8;
  int max_n = 1;
  for (const auto& [terms, cells] : strips) {
    for (const auto& [n, w] : cells) max_n = std::max(max_n, n);
  }
  const double cell_w = (kWidth - kMarginLeft - kMarginRight) / static_cast<double>(max_n);

  for (const auto& [terms, cells] : strips) {
    svg.text(kMarginLeft - 8, top + strip_h / 2 + 4, std::to_string(terms) + " terms",
             "text-anchor=\"end\"");
    for (const auto& [n, w] : cells) {
      svg.rect(kMarginLeft + (n - 1) * cell_w, top, cell_w, strip_h,
               kWordPalette[w % 12], "stroke=\"white\" stroke-width=\"0.5\"");
    }
    top += strip_h + gap;
  }
  for (int n = 1; n <= max_n; ++n) {
    svg.text(kMarginLeft + (n - 0.5) * cell_w, top + 14, std::to_string(n),
             "text-anchor=\"middle\" font-size=\"10\"");
  }

  const std::filesystem::path out = dir / "fig_consensus.svg";
  svg.save(out);
  return out;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir,
                                              const PlotOptions& options) {
  std::vector<std::filesystem::path> written;
  if (options.cost_frontier) written.push_back(plot_cost_frontier(dir, options));
  if (options.term_frequency) written.push_back(plot_term_frequency(dir));
  if (options.consensus) written.push_back(plot_consensus(dir));
  return written;
}

}  // namespace numsig
