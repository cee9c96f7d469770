#include "shapehmm/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace shapehmm {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedModelFile, what); }

template <typename Derived>
json vector_to_json(const Eigen::MatrixBase<Derived>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T number_at(const json& v, const std::string& where) {
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) malformed(where + ": expected a number");
  } else {
    if (!v.is_number_integer()) malformed(where + ": expected an integer");
  }
  return v.get<T>();
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, 1> read_vector(const json& v, const std::string& name, Eigen::Index expected) {
  if (!v.is_array()) malformed("field '" + name + "': expected an array");
  if (static_cast<Eigen::Index>(v.size()) != expected)
    malformed("field '" + name + "': expected " + std::to_string(expected) + " entries, found " +
              std::to_string(v.size()));
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(expected);
  for (Eigen::Index i = 0; i < expected; ++i)
    out(i) = number_at<T>(v[static_cast<std::size_t>(i)], "field '" + name + "' entry " + std::to_string(i));
  return out;
}

template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> read_matrix(const json& v, const std::string& name,
                                                            Eigen::Index rows, Eigen::Index cols) {
  if (!v.is_array()) malformed("field '" + name + "': expected an array of rows");
  if (static_cast<Eigen::Index>(v.size()) != rows)
    malformed("field '" + name + "': expected " + std::to_string(rows) + " rows, found " + std::to_string(v.size()));
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    out.row(i) = read_vector<T>(v[static_cast<std::size_t>(i)], name + "[" + std::to_string(i) + "]", cols);
  return out;
}

template <typename Token>
std::vector<Token> read_tokens(const json& v, const std::string& name) {
  if (!v.is_array()) malformed("field '" + name + "': expected an array of strings");
  std::vector<Token> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) malformed("field '" + name + "' entry " + std::to_string(i) + ": expected a string");
    out.push_back(Token{v[i].get<std::string>()});
  }
  return out;
}

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["alpha"] = model.alpha();
  json states = json::array();
  for (const auto& s : model.states()) states.push_back(s.token);
  json vocab = json::array();
  for (const auto& w : model.vocab()) vocab.push_back(w.token);
  doc["states"] = std::move(states);
  doc["vocab"] = std::move(vocab);
  doc["pi"] = vector_to_json(model.pi());
  doc["a"] = matrix_to_json(model.a());
  doc["b"] = matrix_to_json(model.b());
  doc["b_unseen"] = vector_to_json(model.b_unseen());
  if (const auto& counts = model.counts()) {
    doc["counts"] = {{"initial", vector_to_json(counts->initial)},
                     {"transition", matrix_to_json(counts->transition)},
                     {"emission", matrix_to_json(counts->emission)}};
  }
  out << doc.dump(1) << '\n';
  if (!out) throw Error(Errc::Io, "failed to write model");
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  save_model(model, out);
}

Model load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    malformed("invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) malformed("top level is not an object");

  const json& version = field(doc, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion)
    malformed("format_version mismatch: expected " + std::to_string(kModelFormatVersion) + ", found " + version.dump());

  const double alpha = number_at<double>(field(doc, "alpha"), "field 'alpha'");
  auto states = read_tokens<StateId>(field(doc, "states"), "states");
  auto vocab = read_tokens<Symbol>(field(doc, "vocab"), "vocab");
  const auto k = static_cast<Eigen::Index>(states.size());
  const auto m = static_cast<Eigen::Index>(vocab.size());

  Eigen::VectorXd pi = read_vector<double>(field(doc, "pi"), "pi", k);
  Eigen::MatrixXd a = read_matrix<double>(field(doc, "a"), "a", k, k);
  Eigen::MatrixXd b = read_matrix<double>(field(doc, "b"), "b", k, m);
  Eigen::VectorXd unseen = read_vector<double>(field(doc, "b_unseen"), "b_unseen", k);

  std::optional<TrainingCounts> counts;
  if (auto it = doc.find("counts"); it != doc.end()) {
    if (!it->is_object()) malformed("field 'counts': expected an object");
    counts = TrainingCounts{read_vector<Count>(field(*it, "initial"), "counts.initial", k),
                            read_matrix<Count>(field(*it, "transition"), "counts.transition", k, k),
                            read_matrix<Count>(field(*it, "emission"), "counts.emission", k, m)};
  }

  try {
    return Model(std::move(states), std::move(vocab), std::move(pi), std::move(a), std::move(b), std::move(unseen),
                 alpha, std::move(counts));
  } catch (const std::invalid_argument& e) {
    malformed(e.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace shapehmm
