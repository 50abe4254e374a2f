#pragma once

// JSON descriptors for subshifts, cocycles, fibers, sequences and scales,
// plus a small CSV table writer.
//
// Descriptor shapes:
//   alphabet : 2 | [-1, 1]
//   subshift : {"type": "full", "alphabet": ...}
//              {"type": "sft", "alphabet": ..., "forbidden": [[1, 1], ...]}   (symbols by label)
//              {"type": "golden-mean"}
//              {"type": "sturmian", "alpha": Q, "coding_length": Q}
//              {"type": "product", "left": subshift, "right": subshift}
//   Q        : "golden-conjugate" | "1/3" | 0.25 | {"a": "-1/2", "b": "1/2", "d": 5}
//   cocycle  : {"type": "coordinate"} | {"type": "constant", "value": 0}
//              {"type": "left-coordinate"}                                   (product bases)
//              {"type": "rule", "radius": 1, "rules": [{"window": [...], "value": 2}, ...]}
//   fiber    : {"type": "symbolic", "shift": subshift} | {"type": "rotation", "angle": Q}
//              {"type": "identity", "distances": [[...]]} | {"type": "singleton"}
//              {"type": "toral", "matrix": [[2, 1], [1, 1]], "grid": 64}
//   sequence : {"type": "arithmetic", "start": 2, "step": 2} | {"type": "geometric", "base": 2}
//              {"type": "explicit", "terms": [...]} | {"type": "squares", "up_to": 400}
//   scale    : "exponential" | "polynomial" | "paper-a" | {"kind": "paper-c", "inner": "polynomial"}

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "entroscope/cocycle.hpp"
#include "entroscope/entropy/scale.hpp"
#include "entroscope/entropy/sequence.hpp"
#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"
#include "entroscope/fiber.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::io {

using json = nlohmann::json;

/// Config does not match the descriptor schema.
class SchemaError : public DomainError {
 public:
  using DomainError::DomainError;
};

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::string type_of(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  const auto& t = field(j, "type", where);
  if (!t.is_string()) throw SchemaError(where + ": 'type' must be a string");
  return t.get<std::string>();
}

inline long as_long(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long>();
}

inline symbolic::Symbol symbol_for(const symbolic::Alphabet& a, long label, const std::string& where) {
  for (std::size_t s = 0; s < a.size(); ++s)
    if (a.value(static_cast<symbolic::Symbol>(s)) == label) return static_cast<symbolic::Symbol>(s);
  throw SchemaError(where + ": symbol " + std::to_string(label) + " not in alphabet");
}

inline symbolic::Block block_from_json(const json& j, const symbolic::Alphabet& a, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of symbols");
  symbolic::Block b;
  for (const auto& x : j) b.push_back(symbol_for(a, as_long(x, where), where));
  return b;
}

}  // namespace detail

inline Rational rational_from_json(const json& j, const std::string& where = "rational") {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const DomainError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": expected a number or a rational string");
}

inline QuadNumber quad_from_json(const json& j, const std::string& where = "number") {
  if (j.is_string() && j.get<std::string>() == "golden-conjugate") return QuadNumber::golden_conjugate();
  if (j.is_object()) {
    return QuadNumber(rational_from_json(detail::field(j, "a", where), where),
                      rational_from_json(detail::field(j, "b", where), where),
                      detail::as_long(detail::field(j, "d", where), where));
  }
  return QuadNumber(rational_from_json(j, where));
}

inline json quad_to_json(const QuadNumber& q) { return q.str(); }

inline symbolic::Alphabet alphabet_from_json(const json& j) {
  if (j.is_number_integer()) return symbolic::Alphabet(static_cast<std::size_t>(j.get<long>()));
  if (j.is_array()) {
    std::vector<long> labels;
    for (const auto& x : j) labels.push_back(detail::as_long(x, "alphabet"));
    return symbolic::Alphabet(labels.size(), labels);
  }
  throw SchemaError("alphabet: expected a size or a list of labels");
}

inline symbolic::SubshiftSpec subshift_from_json(const json& j) {
  const std::string type = detail::type_of(j, "subshift");
  if (type == "full") return symbolic::SubshiftSpec::full(alphabet_from_json(detail::field(j, "alphabet", "full")));
  if (type == "golden-mean") return symbolic::SubshiftSpec::golden_mean();
  if (type == "sft") {
    const auto a = alphabet_from_json(detail::field(j, "alphabet", "sft"));
    std::vector<symbolic::Block> forbidden;
    for (const auto& f : detail::field(j, "forbidden", "sft")) forbidden.push_back(detail::block_from_json(f, a, "sft"));
    return symbolic::SubshiftSpec::sft(a, std::move(forbidden));
  }
  if (type == "sturmian") {
    const auto alpha = quad_from_json(detail::field(j, "alpha", "sturmian"), "sturmian.alpha");
    const auto beta = j.contains("coding_length") ? quad_from_json(j.at("coding_length"), "sturmian.coding_length")
                                                  : QuadNumber(Rational(1, 2));
    return symbolic::SubshiftSpec::sturmian(alpha, beta);
  }
  if (type == "product")
    return symbolic::SubshiftSpec::product(subshift_from_json(detail::field(j, "left", "product")),
                                           subshift_from_json(detail::field(j, "right", "product")));
  throw SchemaError("subshift: unknown type '" + type + "'");
}

inline cocycle::Cocycle cocycle_from_json(const json& j, const symbolic::SubshiftSpec& base) {
  const std::string type = detail::type_of(j, "cocycle");
  const auto alphabet = base.alphabet();
  if (type == "coordinate") return cocycle::Cocycle::coordinate(alphabet);
  if (type == "constant")
    return cocycle::Cocycle::constant(alphabet.size(), detail::as_long(detail::field(j, "value", "cocycle"), "cocycle"));
  if (type == "left-coordinate") {
    const auto* p = base.get<symbolic::Product>();
    if (!p) throw SchemaError("cocycle: left-coordinate needs a product base");
    return cocycle::Cocycle::left_coordinate(p->left->alphabet(), p->right->alphabet().size());
  }
  if (type == "rule") {
    const auto radius = detail::as_long(detail::field(j, "radius", "cocycle"), "cocycle.radius");
    if (radius < 0) throw SchemaError("cocycle: radius must be nonnegative");
    std::map<symbolic::Block, long> rule;
    for (const auto& r : detail::field(j, "rules", "cocycle"))
      rule[detail::block_from_json(detail::field(r, "window", "cocycle.rules"), alphabet, "cocycle.rules")] =
          detail::as_long(detail::field(r, "value", "cocycle.rules"), "cocycle.rules");
    return {alphabet.size(), static_cast<std::size_t>(radius), std::move(rule)};
  }
  throw SchemaError("cocycle: unknown type '" + type + "'");
}

inline fiber::FiberSystem fiber_from_json(const json& j) {
  const std::string type = detail::type_of(j, "fiber");
  if (type == "symbolic") return fiber::FiberSystem::symbolic(subshift_from_json(detail::field(j, "shift", "fiber")));
  if (type == "rotation") return fiber::FiberSystem::rotation(quad_from_json(detail::field(j, "angle", "fiber")));
  if (type == "singleton") return fiber::FiberSystem::singleton();
  if (type == "identity") {
    std::vector<std::vector<double>> d;
    for (const auto& row : detail::field(j, "distances", "fiber")) {
      if (!row.is_array()) throw SchemaError("fiber: distances must be a matrix");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) throw SchemaError("fiber: distances must be numbers");
        r.push_back(x.get<double>());
      }
      d.push_back(std::move(r));
    }
    return fiber::FiberSystem::identity(std::move(d));
  }
  if (type == "toral") {
    const auto& m = detail::field(j, "matrix", "fiber");
    if (!m.is_array() || m.size() != 2) throw SchemaError("fiber: toral matrix must be 2x2");
    std::array<std::array<long, 2>, 2> a{};
    for (std::size_t r = 0; r < 2; ++r) {
      if (!m[r].is_array() || m[r].size() != 2) throw SchemaError("fiber: toral matrix must be 2x2");
      for (std::size_t c = 0; c < 2; ++c) a[r][c] = detail::as_long(m[r][c], "fiber.matrix");
    }
    const long grid = j.contains("grid") ? detail::as_long(j.at("grid"), "fiber.grid") : 64;
    return fiber::FiberSystem::toral(a, grid);
  }
  throw SchemaError("fiber: unknown type '" + type + "'");
}

inline entropy::SequenceSpec sequence_from_json(const json& j) {
  const std::string type = detail::type_of(j, "sequence");
  const auto integer = [](const json& x, const char* where) {
    if (x.is_number_integer()) return Integer(x.get<long>());
    if (x.is_string()) return decimal_integer(x.get<std::string>());
    throw SchemaError(std::string(where) + ": expected an integer");
  };
  if (type == "arithmetic")
    return entropy::SequenceSpec::arithmetic(integer(detail::field(j, "start", "sequence"), "sequence.start"),
                                             integer(detail::field(j, "step", "sequence"), "sequence.step"));
  if (type == "geometric")
    return entropy::SequenceSpec::geometric(integer(detail::field(j, "base", "sequence"), "sequence.base"));
  if (type == "explicit") {
    std::vector<Integer> terms;
    for (const auto& x : detail::field(j, "terms", "sequence")) terms.push_back(integer(x, "sequence.terms"));
    return entropy::SequenceSpec::explicit_terms(std::move(terms));
  }
  if (type == "squares") {
    const auto last = detail::as_long(detail::field(j, "up_to", "sequence"), "sequence.up_to");
    std::vector<Integer> terms;
    for (long i = 1; i * i <= last; ++i) terms.push_back(Integer(i * i));
    return entropy::SequenceSpec::explicit_terms(std::move(terms));
  }
  throw SchemaError("sequence: unknown type '" + type + "'");
}

/// Word-sum scales take their base and cocycle from the system.
inline entropy::Scale scale_from_json(const json& j, const symbolic::SubshiftSpec* base, const cocycle::Cocycle* tau) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else {
    const auto& k = detail::field(j, "kind", "scale");
    if (!k.is_string()) throw SchemaError("scale: 'kind' must be a string");
    kind = k.get<std::string>();
  }
  const auto need_system = [&] {
    if (!base || !tau) throw SchemaError("scale '" + kind + "' needs a base subshift and cocycle");
  };
  if (kind == "exponential") return entropy::Scale::exponential();
  if (kind == "polynomial") return entropy::Scale::polynomial();
  if (kind == "paper-a") {
    need_system();
    return entropy::Scale::paper_a(*base, *tau);
  }
  if (kind == "paper-c") {
    need_system();
    const json inner = j.is_object() && j.contains("inner") ? j.at("inner") : json("polynomial");
    auto in = scale_from_json(inner, nullptr, nullptr);
    try {
      return entropy::Scale::paper_c(*base, *tau, std::move(in));
    } catch (const DomainError& e) {
      throw SchemaError(std::string("scale: ") + e.what());
    }
  }
  throw SchemaError("scale: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// CSV

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw InconsistencyError("table row width mismatch in " + name);
    rows.push_back(std::move(row));
  }
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  const auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline void write_csv_file(const std::string& path, const Table& t) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  write_csv(f, t);
}

/// Fixed 12 significant digits so payloads are byte-stable across runs.
inline std::string fmt(long double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << static_cast<double>(x);
  return os.str();
}

inline std::string fmt(const Integer& x) { return x.str(); }
inline std::string fmt(const Rational& x) { return to_string(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }

}  // namespace entroscope::io
