#include "qsure/measure.hpp"

#include <cctype>

namespace qsure {

std::string rat_str(const Rat& r) {
  std::string num = numerator(r).str();
  if (denominator(r) == 1) return num;
  return num + "/" + denominator(r).str();
}

std::optional<Rat> parse_rat(std::string_view s) {
  if (s.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (s[0] == '-') {
    neg = true;
    i = 1;
  }
  auto digits = [&](size_t from, size_t to) -> std::optional<Int> {
    if (from == to) return std::nullopt;
    for (size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
    return Int(std::string(s.substr(from, to - from)));
  };
  size_t slash = s.find('/', i);
  if (slash == std::string_view::npos) {
    auto p = digits(i, s.size());
    if (!p) return std::nullopt;
    Rat r(*p);
    return neg ? Rat(-r) : r;
  }
  auto p = digits(i, slash);
  auto q = digits(slash + 1, s.size());
  if (!p || !q || *q == 0) return std::nullopt;
  Rat r(*p, *q);
  return neg ? Rat(-r) : r;
}

SignedMeasure::SignedMeasure(std::map<std::string, Rat> weights) : weights_(std::move(weights)) {
  for (auto it = weights_.begin(); it != weights_.end();) {
    if (it->second == 0)
      it = weights_.erase(it);
    else
      ++it;
  }
}

Rat SignedMeasure::at(const std::string& id) const {
  auto it = weights_.find(id);
  return it == weights_.end() ? Rat(0) : it->second;
}

Rat SignedMeasure::mass(const AtomSet& s) const {
  Rat total(0);
  for (const auto& [id, w] : weights_)
    if (s.count(id)) total += w;
  return total;
}

AtomSet SignedMeasure::support() const {
  AtomSet s;
  for (const auto& [id, w] : weights_) s.insert(id);
  return s;
}

SignedMeasure SignedMeasure::restricted(const AtomSet& s) const {
  std::map<std::string, Rat> w;
  for (const auto& [id, weight] : weights_)
    if (s.count(id)) w.emplace(id, weight);
  return SignedMeasure(std::move(w));
}

SignedMeasure SignedMeasure::abs() const {
  std::map<std::string, Rat> w;
  for (const auto& [id, weight] : weights_) w.emplace(id, rat_abs(weight));
  return SignedMeasure(std::move(w));
}

SignedMeasure SignedMeasure::scaled(const Rat& c) const {
  std::map<std::string, Rat> w;
  for (const auto& [id, weight] : weights_) w.emplace(id, Rat(c * weight));
  return SignedMeasure(std::move(w));
}

SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b) {
  std::map<std::string, Rat> w = a.weights_;
  for (const auto& [id, weight] : b.weights_) {
    auto [it, fresh] = w.emplace(id, weight);
    if (!fresh) it->second += weight;
  }
  return SignedMeasure(std::move(w));
}

SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b) {
  return a + b.scaled(Rat(-1));
}

ProbabilityMeasure::ProbabilityMeasure(SignedMeasure m) : m_(std::move(m)) {
  Rat total(0);
  for (const auto& [id, w] : m_.weights()) {
    if (w < 0) throw ValidationError("probability measure has negative weight on atom '" + id + "'");
    total += w;
  }
  if (total != 1)
    throw ValidationError("probability weights sum to " + rat_str(total) + ", expected 1");
}

ProbabilityMeasure::ProbabilityMeasure(std::map<std::string, Rat> weights)
    : ProbabilityMeasure(SignedMeasure(std::move(weights))) {}

ProbabilityMeasure ProbabilityMeasure::dirac(const std::string& atom_id) {
  return ProbabilityMeasure(SignedMeasure({{atom_id, Rat(1)}}));
}

Rat tv_norm(const SignedMeasure& mu) {
  Rat total(0);
  for (const auto& [id, w] : mu.weights()) total += rat_abs(w);
  return total;
}

HahnJordan hahn_jordan(const SignedMeasure& mu) {
  std::map<std::string, Rat> pos, neg;
  HahnJordan hj;
  for (const auto& [id, w] : mu.weights()) {
    if (w > 0) {
      pos.emplace(id, w);
      hj.pos_atoms.insert(id);
    } else {
      neg.emplace(id, Rat(-w));
      hj.neg_atoms.insert(id);
    }
  }
  hj.pos = SignedMeasure(std::move(pos));
  hj.neg = SignedMeasure(std::move(neg));
  return hj;
}

bool is_abs_continuous(const SignedMeasure& mu, const SignedMeasure& nu) {
  for (const auto& [id, w] : mu.weights())
    if (nu.at(id) == 0) return false;
  return true;
}

bool is_abs_continuous(const SignedMeasure& mu, const ProbabilityMeasure& nu) {
  return is_abs_continuous(mu, nu.measure());
}

bool is_singular(const SignedMeasure& mu, const SignedMeasure& nu) {
  for (const auto& [id, w] : mu.weights())
    if (nu.at(id) != 0) return false;
  return true;
}

LebesgueParts lebesgue_decompose(const SignedMeasure& mu, const SignedMeasure& nu) {
  std::map<std::string, Rat> ac, sing;
  for (const auto& [id, w] : mu.weights()) {
    if (nu.at(id) != 0)
      ac.emplace(id, w);
    else
      sing.emplace(id, w);
  }
  return {SignedMeasure(std::move(ac)), SignedMeasure(std::move(sing))};
}

ProbabilityMeasure mix(const std::vector<Rat>& weights,
                       const std::vector<ProbabilityMeasure>& measures) {
  if (weights.size() != measures.size())
    throw ValidationError("mix: weight and measure lists differ in length");
  Rat total(0);
  for (const auto& w : weights) {
    if (w < 0) throw ValidationError("mix: negative weight " + rat_str(w));
    total += w;
  }
  if (total != 1)
    throw ValidationError("mix: weights sum to " + rat_str(total) + ", expected 1");
  SignedMeasure acc;
  for (size_t i = 0; i < measures.size(); ++i)
    acc = acc + measures[i].measure().scaled(weights[i]);
  return ProbabilityMeasure(std::move(acc));
}

std::map<std::string, std::string> serialize_weights(const SignedMeasure& mu) {
  std::map<std::string, std::string> out;
  for (const auto& [id, w] : mu.weights()) out.emplace(id, rat_str(w));
  return out;
}

SignedMeasure deserialize_weights(const std::map<std::string, std::string>& w) {
  std::map<std::string, Rat> m;
  for (const auto& [id, s] : w) {
    auto r = parse_rat(s);
    if (!r) throw ValidationError("bad rational '" + s + "' for atom '" + id + "'");
    m.emplace(id, *r);
  }
  return SignedMeasure(std::move(m));
}

}  // namespace qsure
