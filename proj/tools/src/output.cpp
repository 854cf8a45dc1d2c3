#include "smcbf/app/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace smcbf::app {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::vector<std::string> trajectory_columns(const sim::TrajectoryLog& log) {
  std::vector<std::string> cols{"t"};
  auto add = [&](const std::string& prefix, const std::vector<std::string>& names) {
    for (const auto& n : names) cols.push_back(prefix + n);
  };
  add("", log.state_names);
  add("y_", log.output_names);
  add("ref_", log.output_names);
  add("u_nominal_", log.input_names);
  add("u_filtered_", log.input_names);
  add("u_applied_", log.input_names);
  for (const auto& c : log.constraint_names) {
    for (const char* suffix : {"", "_rate", "_sliding", "_virtual_bound", "_excursion", "_active"})
      cols.push_back(c + suffix);
  }
  for (const char* c : {"qp_status", "qp_iterations", "filter_engaged", "constraint_active",
                        "qp_fallback", "clamp_hit"})
    cols.emplace_back(c);
  return cols;
}

void write_trajectory_csv(const sim::TrajectoryLog& log, std::ostream& out) {
  const auto cols = trajectory_columns(log);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  std::string line;
  auto put = [&](const std::string& s) {
    line += ',';
    line += s;
  };
  auto put_vec = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put(format_number(v(i)));
  };
  for (const auto& r : log.records) {
    line = format_number(r.t);
    put_vec(r.state);
    put_vec(r.output);
    put_vec(r.reference);
    put_vec(r.u_nominal);
    put_vec(r.u_filtered);
    put_vec(r.u_applied);
    for (const auto& c : r.constraints) {
      put(format_number(c.h));
      put(format_number(c.h_rate));
      put(format_number(c.sliding));
      put(format_number(c.virtual_bound));
      put(format_number(c.excursion));
      put(c.active ? "1" : "0");
    }
    put(std::string(qp::to_string(r.qp_status)));
    put(std::to_string(r.qp_iterations));
    put(r.filter_engaged ? "1" : "0");
    put(r.constraint_active ? "1" : "0");
    put(r.qp_fallback ? "1" : "0");
    put(r.clamp_hit ? "1" : "0");
    line += '\n';
    out << line;
  }
}

namespace {

// JSON has no infinities; those become null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json metrics_to_json(const sim::Metrics& m) {
  Json constraints = Json::array();
  for (const auto& c : m.constraints) {
    Json intervals = Json::array();
    for (const auto& v : c.violations)
      intervals.push_back(
          {{"start", v.start}, {"end", v.end}, {"steps", v.steps}, {"duration", v.duration}});
    Json entry = {{"name", c.name},
                  {"min_h", finite_or_null(c.min_h)},
                  {"max_excursion", c.max_excursion},
                  {"violation_count", c.violations.size()},
                  {"violations", intervals}};
    if (c.sliding) {
      entry["sliding_condition"] = {{"checked_samples", c.sliding->checked_samples},
                                    {"violations", c.sliding->violations},
                                    {"max_residual", finite_or_null(c.sliding->max_residual)}};
    } else {
      entry["sliding_condition"] = nullptr;
    }
    constraints.push_back(entry);
  }
  return {{"min_h", finite_or_null(m.min_h)},
          {"safety_violated", m.safety_violated},
          {"safety_tolerance", sim::kSafetyTolerance},
          {"constraints", constraints},
          {"tracking_rms", m.tracking_rms},
          {"qp_fallbacks", m.qp_fallbacks},
          {"clamp_events", m.clamp_events},
          {"active_steps", m.active_steps},
          {"max_qp_iterations", m.max_qp_iterations}};
}

// Plots --------------------------------------------------------------------

namespace {

struct Series {
  std::string label;
  std::vector<double> values;
};

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void write_chart(const std::filesystem::path& path, const std::string& title,
                 const std::vector<double>& t, const std::vector<Series>& series) {
  constexpr double kWidth = 800, kHeight = 360, kLeft = 70, kRight = 20, kTop = 30, kBottom = 40;
  constexpr std::size_t kMaxPoints = 2000;
  const std::size_t stride = std::max<std::size_t>(1, t.size() / kMaxPoints);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series)
    for (double v : s.values)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double t0 = t.front();
  const double t1 = t.back() > t0 ? t.back() : t0 + 1.0;
  auto px = [&](double x) { return kLeft + (x - t0) / (t1 - t0) * (kWidth - kLeft - kRight); };
  auto py = [&](double y) { return kTop + (hi - y) / (hi - lo) * (kHeight - kTop - kBottom); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\">" << escape(title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = lo + (hi - lo) * i / 4.0;
    const double x = t0 + (t1 - t0) * i / 4.0;
    out << "<text x=\"" << kLeft - 4 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << format_number(std::round(y * 1e6) / 1e6) << "</text>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kBottom + 15
        << "\" text-anchor=\"middle\">" << format_number(std::round(x * 1e3) / 1e3)
        << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 6
      << "\" text-anchor=\"middle\">t [s]</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % kColors.size()];
    out << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < t.size(); i += stride) {
      const double v = series[k].values[i];
      if (!std::isfinite(v)) continue;
      out << px(t[i]) << ',' << py(v) << ' ';
    }
    out << "\"/>\n"
        << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 + 14 * k
        << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(series[k].label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

template <class Get>
std::vector<Series> collect(const sim::TrajectoryLog& log, const std::vector<std::string>& names,
                            const std::string& suffix, Get get) {
  std::vector<Series> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Series s{names[i] + suffix, {}};
    s.values.reserve(log.records.size());
    for (const auto& r : log.records) s.values.push_back(get(r, i));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<std::filesystem::path> write_plots(const sim::TrajectoryLog& log,
                                               const std::filesystem::path& dir) {
  std::vector<double> t;
  for (const auto& r : log.records) t.push_back(r.t);
  const auto idx = [](std::size_t i) { return static_cast<Eigen::Index>(i); };

  std::vector<std::filesystem::path> files;
  auto emit = [&](const std::string& file, const std::string& title,
                  const std::vector<Series>& series) {
    files.push_back(dir / file);
    write_chart(files.back(), title, t, series);
  };

  emit("states.svg", "States",
       collect(log, log.state_names, "", [&](const auto& r, std::size_t i) { return r.state(idx(i)); }));

  auto outputs = collect(log, log.output_names, "",
                         [&](const auto& r, std::size_t i) { return r.output(idx(i)); });
  auto refs = collect(log, log.output_names, " ref",
                      [&](const auto& r, std::size_t i) { return r.reference(idx(i)); });
  outputs.insert(outputs.end(), refs.begin(), refs.end());
  emit("outputs.svg", "Outputs and references", outputs);

  auto inputs = collect(log, log.input_names, " applied",
                        [&](const auto& r, std::size_t i) { return r.u_applied(idx(i)); });
  auto nominal = collect(log, log.input_names, " nominal",
                         [&](const auto& r, std::size_t i) { return r.u_nominal(idx(i)); });
  inputs.insert(inputs.end(), nominal.begin(), nominal.end());
  emit("inputs.svg", "Inputs", inputs);

  emit("barrier.svg", "Safety function h",
       collect(log, log.constraint_names, "",
               [](const auto& r, std::size_t i) { return r.constraints[i].h; }));

  if (log.mode == sim::FilterMode::kSmcbf)
    emit("sliding.svg", "Sliding variable S",
         collect(log, log.constraint_names, "",
                 [](const auto& r, std::size_t i) { return r.constraints[i].sliding; }));
  return files;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256: digest init failed");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace smcbf::app
