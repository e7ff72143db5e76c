#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fairvec/embedding.hpp"
#include "fairvec/geometry.hpp"

namespace fairvec {

enum class ReportKind { Word, Global };

// A table cell: null, number or text.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table &, const Table &) = default;
};

struct Section {
  std::string title;
  // monostate marks a scalar that is undefined for this input.
  std::variant<std::monostate, double, Table> payload;

  friend bool operator==(const Section &, const Section &) = default;
};

struct ReportDocument {
  ReportKind kind = ReportKind::Word;
  std::string subject;
  std::vector<Section> sections;
  std::vector<std::string> attachments;
  nlohmann::json metadata = nlohmann::json::object();

  const Section &section(std::string_view title) const;

  nlohmann::json to_json() const;
  static ReportDocument from_json(const nlohmann::json &j);

  friend bool operator==(const ReportDocument &, const ReportDocument &) = default;
};

enum class ReportFormat { Text, Json };

// Deterministic serialization: JSON with sorted keys, or aligned text.
std::string render(const ReportDocument &doc, ReportFormat format);

struct WordReportOptions {
  double theta = 0.05;
  std::filesystem::path output_dir = ".";
};

// Direct bias, proximity bias and the neighbour table for one word, plus
// <word>-neighbors.svg and <word>-cloud.svg written to output_dir.
ReportDocument word_report(const Embedding &e, const BiasDirection &g, std::string_view word, std::size_t k,
                           const WordReportOptions &options = {});

// The n most and least biased words by |cos(w, g)| and the vocabulary-wide
// direct bias, from a single projection pass over the matrix.
ReportDocument global_report(const Embedding &e, const BiasDirection &g, std::size_t n);

} // namespace fairvec
