#include "fairvec/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fairvec/error.hpp"
#include "fairvec/log.hpp"
#include "fairvec/metrics.hpp"
#include "fairvec/viz.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fairvec {

const Section &ReportDocument::section(std::string_view title) const {
  for (const auto &s : sections)
    if (s.title == title)
      return s;
  throw std::out_of_range("report has no section '" + std::string(title) + "'");
}

namespace {

json cell_to_json(const Cell &c) {
  if (std::holds_alternative<double>(c))
    return std::get<double>(c);
  if (std::holds_alternative<std::string>(c))
    return std::get<std::string>(c);
  return nullptr;
}

Cell cell_from_json(const json &j) {
  if (j.is_number())
    return j.get<double>();
  if (j.is_string())
    return j.get<std::string>();
  if (j.is_null())
    return std::monostate{};
  throw FormatError("report cell must be a number, string or null");
}

} // namespace

json ReportDocument::to_json() const {
  json sections_json = json::array();
  for (const auto &s : sections) {
    json entry{{"title", s.title}};
    if (std::holds_alternative<double>(s.payload)) {
      entry["type"] = "scalar";
      entry["value"] = std::get<double>(s.payload);
    } else if (std::holds_alternative<Table>(s.payload)) {
      const auto &t = std::get<Table>(s.payload);
      entry["type"] = "table";
      entry["columns"] = t.columns;
      json rows = json::array();
      for (const auto &r : t.rows) {
        json row = json::array();
        for (const auto &c : r)
          row.push_back(cell_to_json(c));
        rows.push_back(row);
      }
      entry["rows"] = rows;
    } else {
      entry["type"] = "scalar";
      entry["value"] = nullptr;
    }
    sections_json.push_back(entry);
  }
  return {{"kind", kind == ReportKind::Word ? "word" : "global"},
          {"subject", subject},
          {"sections", sections_json},
          {"attachments", attachments},
          {"metadata", metadata}};
}

ReportDocument ReportDocument::from_json(const json &j) {
  try {
    ReportDocument doc;
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "word" && kind != "global")
      throw FormatError("unknown report kind '" + kind + "'");
    doc.kind = kind == "word" ? ReportKind::Word : ReportKind::Global;
    doc.subject = j.at("subject").get<std::string>();
    doc.attachments = j.at("attachments").get<std::vector<std::string>>();
    doc.metadata = j.at("metadata");
    for (const auto &s : j.at("sections")) {
      Section section;
      section.title = s.at("title").get<std::string>();
      if (s.at("type") == "table") {
        Table t;
        t.columns = s.at("columns").get<std::vector<std::string>>();
        for (const auto &r : s.at("rows")) {
          std::vector<Cell> row;
          for (const auto &c : r)
            row.push_back(cell_from_json(c));
          t.rows.push_back(std::move(row));
        }
        section.payload = std::move(t);
      } else if (s.at("value").is_null()) {
        section.payload = std::monostate{};
      } else {
        section.payload = s.at("value").get<double>();
      }
      doc.sections.push_back(std::move(section));
    }
    return doc;
  } catch (const json::exception &e) {
    throw FormatError(std::string("malformed report JSON: ") + e.what());
  }
}

namespace {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s(buf);
  if (s == "-0.000000")
    s = "0.000000";
  return s;
}

std::string cell_text(const Cell &c, bool integral = false) {
  if (std::holds_alternative<double>(c))
    return integral ? std::to_string(static_cast<long long>(std::get<double>(c))) : format_number(std::get<double>(c));
  if (std::holds_alternative<std::string>(c))
    return std::get<std::string>(c);
  return "n/a";
}

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    n += (c & 0xC0) != 0x80;
  return n;
}

void pad(std::string &out, std::string_view s, std::size_t width, bool right_align) {
  const std::size_t fill = width > display_width(s) ? width - display_width(s) : 0;
  if (right_align)
    out.append(fill, ' ');
  out += s;
  if (!right_align)
    out.append(fill, ' ');
}

std::string render_text(const ReportDocument &doc) {
  std::string out;
  const std::string heading =
      (doc.kind == ReportKind::Word ? "Word report: " : "Global report: ") + doc.subject;
  out += heading + "\n" + std::string(display_width(heading), '=') + "\n";
  for (const auto &s : doc.sections) {
    out += "\n";
    if (std::holds_alternative<double>(s.payload)) {
      out += s.title + ": " + format_number(std::get<double>(s.payload)) + "\n";
      continue;
    }
    if (std::holds_alternative<std::monostate>(s.payload)) {
      out += s.title + ": n/a\n";
      continue;
    }
    const auto &t = std::get<Table>(s.payload);
    out += s.title + "\n";
    std::vector<std::size_t> widths(t.columns.size());
    std::vector<bool> numeric(t.columns.size(), false);
    // Columns holding only whole numbers (ranks, counts) print without decimals.
    std::vector<bool> integral(t.columns.size(), true);
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      widths[c] = display_width(t.columns[c]);
    for (const auto &r : t.rows)
      for (std::size_t c = 0; c < r.size() && c < widths.size(); ++c) {
        const bool number = std::holds_alternative<double>(r[c]);
        numeric[c] = numeric[c] || number;
        if (!number || std::get<double>(r[c]) != std::trunc(std::get<double>(r[c])) ||
            std::abs(std::get<double>(r[c])) > 1e15)
          integral[c] = false;
      }
    for (const auto &r : t.rows)
      for (std::size_t c = 0; c < r.size() && c < widths.size(); ++c)
        widths[c] = std::max(widths[c], display_width(cell_text(r[c], integral[c])));
    std::string line = "  ";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c)
        line += "  ";
      pad(line, t.columns[c], widths[c], numeric[c]);
    }
    while (!line.empty() && line.back() == ' ')
      line.pop_back();
    out += line + "\n";
    std::size_t total = 0;
    for (auto w : widths)
      total += w;
    out += "  " + std::string(total + 2 * (widths.empty() ? 0 : widths.size() - 1), '-') + "\n";
    if (t.rows.empty())
      out += "  (empty)\n";
    for (const auto &r : t.rows) {
      line = "  ";
      for (std::size_t c = 0; c < r.size() && c < widths.size(); ++c) {
        if (c)
          line += "  ";
        pad(line, cell_text(r[c], integral[c]), widths[c], numeric[c]);
      }
      while (!line.empty() && line.back() == ' ')
        line.pop_back();
      out += line + "\n";
    }
  }
  if (!doc.attachments.empty()) {
    out += "\nattachments\n";
    for (const auto &a : doc.attachments)
      out += "  " + a + "\n";
  }
  return out;
}

std::string safe_file_stem(std::string_view word) {
  std::string out(word);
  for (char &c : out)
    if (c == '/' || c == '\\' || c == '\0')
      c = '_';
  return out;
}

} // namespace

std::string render(const ReportDocument &doc, ReportFormat format) {
  if (format == ReportFormat::Json)
    return doc.to_json().dump(2) + "\n";
  return render_text(doc);
}

ReportDocument word_report(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k,
                           const WordReportOptions &options) {
  require_normalized(e, "word report");
  e.index_of(word);
  ReportDocument doc;
  doc.kind = ReportKind::Word;
  doc.subject = std::string(word);
  const std::vector<std::string> single{std::string(word)};
  doc.sections.push_back({"direct bias", direct_bias(e, g, single, 1.0).value("direct_bias")});
  try {
    doc.sections.push_back({"proximity bias", proximity_bias(e, g, word, k, options.theta).value("proximity_bias")});
  } catch (const DegenerateError &err) {
    doc.sections.push_back({"proximity bias", std::monostate{}});
    doc.metadata["proximity_bias_note"] = err.what();
  }
  const auto analysis = neighbours_analysis(e, g, word, k);
  Table table{{"word", "cosine", "cosine_to_direction", "abs_indirect_bias"}, {}};
  std::vector<std::pair<std::string, double>> cloud;
  for (const auto &n : analysis.neighbors) {
    table.rows.push_back({n.word, n.cosine, n.cosine_to_direction,
                          n.abs_indirect_bias ? Cell{*n.abs_indirect_bias} : Cell{std::monostate{}}});
    cloud.emplace_back(n.word, std::max(0.0, n.cosine));
  }
  doc.sections.push_back({"neighbours", std::move(table)});
  doc.metadata["k"] = k;
  doc.metadata["theta"] = options.theta;
  doc.metadata["c"] = 1.0;
  doc.metadata["direction"] = to_string(g.method);

  std::error_code ec;
  fs::create_directories(options.output_dir, ec);
  const auto stem = safe_file_stem(word);
  const fs::path scatter = options.output_dir / (stem + "-neighbors.svg");
  const fs::path cloud_path = options.output_dir / (stem + "-cloud.svg");
  for (const auto &p : {scatter, cloud_path})
    if (fs::exists(p))
      warn("overwriting existing attachment '" + p.string() + "'");
  if (!analysis.neighbors.empty()) {
    neighbor_scatter(e, g, word, k, scatter);
    word_cloud(cloud, cloud_path);
    doc.attachments = {scatter.string(), cloud_path.string()};
  }
  return doc;
}

ReportDocument global_report(const Embedding &e, const BiasDirection &g, std::size_t n) {
  if (n < 1)
    throw UsageError("global report needs n >= 1");
  if (e.empty())
    throw DataError("global report of an empty embedding");
  if (g.dim() != e.dim())
    throw PreconditionError("bias direction dimension does not match the embedding");
  const std::size_t v = e.size();
  std::vector<double> score(v);
  double sum = 0.0;
  for (std::size_t i = 0; i < v; ++i) {
    score[i] = std::abs(cosine_to_direction(e, i, g));
    sum += score[i];
  }
  const std::size_t take = std::min(n, v);
  std::vector<std::size_t> order(v);
  std::iota(order.begin(), order.end(), 0);
  auto ranked = [&](bool most) {
    std::vector<std::size_t> idx = order;
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (score[a] != score[b])
                          return most ? score[a] > score[b] : score[a] < score[b];
                        return a < b;
                      });
    Table t{{"rank", "word", "abs_cosine"}, {}};
    for (std::size_t r = 0; r < take; ++r)
      t.rows.push_back({static_cast<double>(r + 1), e.word(idx[r]), score[idx[r]]});
    return t;
  };
  ReportDocument doc;
  doc.kind = ReportKind::Global;
  doc.subject = "embedding (" + std::to_string(v) + " x " + std::to_string(e.dim()) + ")";
  doc.sections.push_back({"most biased", ranked(true)});
  doc.sections.push_back({"least biased", ranked(false)});
  doc.sections.push_back({"direct bias (vocabulary mean)", sum / static_cast<double>(v)});
  doc.metadata["n"] = n;
  doc.metadata["n_effective"] = take;
  if (take < n)
    doc.metadata["note"] = "n exceeds the vocabulary size; lists truncated";
  doc.metadata["direction"] = to_string(g.method);
  doc.metadata["aggregate"] = "vocabulary-level mean |cos(w, g)| (c = 1), an addition beyond the ranked lists";
  return doc;
}

} // namespace fairvec
