#include "isopair/shift_operator.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "isopair/shapovalov.hpp"

namespace isopair {

RationalFunction ShiftTerm::value(long n) const {
  if (n < 0 || n + offset < 0) return RationalFunction();
  if (auto it = boundary.find(n); it != boundary.end()) return it->second;
  return stable.eval_n(Rational(n));
}

const ShiftTerm* ShiftOperator::term(long offset) const {
  auto it = terms_.find(offset);
  return it == terms_.end() ? nullptr : &it->second;
}

long ShiftOperator::max_abs_offset() const {
  long k = 0;
  for (const auto& [s, t] : terms_) k = std::max(k, std::labs(s));
  return k;
}

RationalFunction ShiftOperator::value(long offset, long n) const {
  const ShiftTerm* t = term(offset);
  return t ? t->value(n) : RationalFunction();
}

std::string ShiftOperator::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [s, t] : terms_) {
    if (!out.empty()) out += '\n';
    out += "offset " + std::to_string(s) + ": " + t.stable.str();
    if (!t.boundary.empty()) {
      out += " [boundary ";
      bool first = true;
      for (const auto& [n, v] : t.boundary) {
        if (!first) out += ", ";
        first = false;
        out += "n=" + std::to_string(n) + ": " + v.str();
      }
      out += "]";
    }
  }
  return out;
}

namespace {

using ValueFn = std::function<RationalFunction(long)>;

// Builds a canonical term: records boundary entries for n < candidate wherever the operational
// value differs from the stable form or the stable form is singular, then computes the minimal
// threshold. Callers guarantee the stable form is regular and authoritative from `candidate` on.
// Returns false (and leaves `out` untouched) for a vanishing term.
bool finalize(long s, RationalFunction stable, const ValueFn& operational, long candidate, const VermaContext& ctx,
              ShiftTerm& out) {
  stable = ctx.specialize(stable);
  candidate = std::max({candidate, -s, 0L});
  std::map<long, RationalFunction> boundary;
  for (long n = 0; n < candidate; ++n) {
    RationalFunction v = (n + s < 0) ? RationalFunction() : ctx.specialize(operational(n));
    if (ctx.singular_at(stable, n) || stable.eval_n(Rational(n)) != v) boundary.emplace(n, std::move(v));
  }
  if (stable.is_zero() && boundary.empty()) return false;
  long threshold = std::max(0L, -s);
  if (!boundary.empty()) threshold = std::max(threshold, boundary.rbegin()->first + 1);
  out = ShiftTerm{s, std::move(stable), std::move(boundary), threshold};
  return true;
}

void require_same_context(const ShiftOperator& a, const ShiftOperator& b) {
  if (!(a.context() == b.context()))
    throw std::invalid_argument("operators live in different Verma contexts (" + a.context().str() + " vs " +
                                b.context().str() + ")");
}

}  // namespace

ShiftOperator op_make(const std::vector<TermSpec>& specs, const VermaContext& ctx) {
  ShiftOperator out(ctx);
  for (const auto& spec : specs) {
    const long s = spec.offset;
    if (out.terms_.count(s) != 0) throw std::invalid_argument("repeated offset " + std::to_string(s));
    const RationalFunction stable = ctx.specialize(spec.stable);
    std::map<long, RationalFunction> boundary;
    for (const auto& [n, v] : spec.boundary) {
      if (n < 0) throw std::invalid_argument("boundary entry at negative degree");
      if (!v.is_constant_in_n()) throw std::invalid_argument("boundary values must not depend on n");
      boundary.emplace(n, ctx.specialize(v));
    }
    long candidate = std::max(0L, -s);
    if (!boundary.empty()) candidate = std::max(candidate, boundary.rbegin()->first + 1);
    const long scan = candidate + 2 * (stable.denominator().degree_n() + 1) + 16;
    for (long p : ctx.integer_poles(stable, scan)) {
      if (p + s < 0) continue;  // annihilated anyway
      if (boundary.count(p) == 0)
        throw PoleError("inadmissible operator: pole of " + stable.str() + " at n=" + std::to_string(p) +
                        " (offset " + std::to_string(s) + ") is not shielded");
      candidate = std::max(candidate, p + 1);
    }
    const ValueFn op = [&](long n) {
      auto it = boundary.find(n);
      return it != boundary.end() ? it->second : stable.eval_n(Rational(n));
    };
    ShiftTerm t;
    if (finalize(s, stable, op, candidate, ctx, t)) out.terms_.emplace(s, std::move(t));
  }
  return out;
}

ShiftOperator op_add(const ShiftOperator& a, const ShiftOperator& b) {
  require_same_context(a, b);
  ShiftOperator out(a.ctx_);
  std::map<long, std::pair<const ShiftTerm*, const ShiftTerm*>> by_offset;
  for (const auto& [s, t] : a.terms_) by_offset[s].first = &t;
  for (const auto& [s, t] : b.terms_) by_offset[s].second = &t;
  for (const auto& [s, pair] : by_offset) {
    const auto [ta, tb] = pair;
    if (!ta || !tb) {
      out.terms_.emplace(s, ta ? *ta : *tb);
      continue;
    }
    const ValueFn op = [&](long n) { return ta->value(n) + tb->value(n); };
    ShiftTerm t;
    if (finalize(s, ta->stable + tb->stable, op, std::max(ta->threshold, tb->threshold), a.ctx_, t))
      out.terms_.emplace(s, std::move(t));
  }
  return out;
}

ShiftOperator op_scale(const ShiftOperator& a, const RationalFunction& lambda) {
  if (!lambda.is_constant_in_n()) throw std::invalid_argument("op_scale: scalar depends on n");
  ShiftOperator out(a.ctx_);
  const RationalFunction l = a.ctx_.specialize(lambda);
  if (l.is_zero()) return out;
  for (const auto& [s, t] : a.terms_) {
    const ValueFn op = [&](long n) { return t.value(n) * l; };
    ShiftTerm st;
    if (finalize(s, t.stable * l, op, t.threshold, a.ctx_, st)) out.terms_.emplace(s, std::move(st));
  }
  return out;
}

ShiftOperator op_compose(const ShiftOperator& a, const ShiftOperator& b) {
  require_same_context(a, b);
  ShiftOperator out(a.ctx_);
  struct Pair {
    const ShiftTerm* a;
    const ShiftTerm* b;
  };
  std::map<long, std::vector<Pair>> by_offset;
  for (const auto& [sb, tb] : b.terms_)
    for (const auto& [sa, ta] : a.terms_) by_offset[sa + sb].push_back({&ta, &tb});
  for (const auto& [s, pairs] : by_offset) {
    RationalFunction stable;
    long candidate = -s;
    for (const auto& p : pairs) {
      const long sb = p.b->offset;
      stable += p.a->stable.shift_n(sb) * p.b->stable;
      candidate = std::max({candidate, p.b->threshold, p.a->threshold - sb, -sb});
    }
    const ValueFn op = [&](long n) {
      RationalFunction acc;
      for (const auto& p : pairs) {
        RationalFunction vb = p.b->value(n);
        if (vb.is_zero()) continue;
        acc += p.a->value(n + p.b->offset) * vb;
      }
      return acc;
    };
    ShiftTerm t;
    if (finalize(s, stable, op, candidate, a.ctx_, t)) out.terms_.emplace(s, std::move(t));
  }
  return out;
}

ShiftOperator op_commutator(const ShiftOperator& a, const ShiftOperator& b) {
  return op_compose(a, b) - op_compose(b, a);
}

ShiftOperator op_adjoint(const ShiftOperator& a) {
  if (!a.ctx_.unitarizable())
    throw std::domain_error("adjoint requires a unitarizable context (h > 0), got h=" + a.ctx_.str());
  ShiftOperator out(a.ctx_);
  for (const auto& [s, t] : a.terms_) {
    // c*(m) = c(m - s) w(m) / w(m - s), offset -s.
    const RationalFunction ratio = weight_ratio(s, a.ctx_);
    const RationalFunction stable = t.stable.shift_n(-s) * ratio.shift_n(-s);
    const ValueFn op = [&](long m) {
      if (m - s < 0) return RationalFunction();
      RationalFunction v = t.value(m - s);
      if (v.is_zero()) return v;
      return v * ratio.eval_n(Rational(m - s));
    };
    ShiftTerm st;
    if (finalize(-s, stable, op, std::max(t.threshold + s, s), a.ctx_, st)) out.terms_.emplace(-s, std::move(st));
  }
  return out;
}

std::vector<RationalFunction> op_apply_vector(const ShiftOperator& a, const std::vector<RationalFunction>& v) {
  std::map<long, RationalFunction> acc;
  for (long n = 0; n < static_cast<long>(v.size()); ++n) {
    if (v[n].is_zero()) continue;
    if (!v[n].is_constant_in_n()) throw std::invalid_argument("vector coefficients must not depend on n");
    for (const auto& [s, t] : a.terms()) {
      if (n + s < 0) continue;
      RationalFunction c = t.value(n);
      if (!c.is_zero()) acc[n + s] += c * v[n];
    }
  }
  long size = 0;
  for (const auto& [m, c] : acc)
    if (!c.is_zero()) size = m + 1;
  std::vector<RationalFunction> out(size);
  for (auto& [m, c] : acc)
    if (m < size) out[m] = std::move(c);
  return out;
}

ShiftOperator op_identity(const VermaContext& ctx) { return op_make({{0, RationalFunction(1)}}, ctx); }

ShiftOperator op_diagonal(const RationalFunction& c, const VermaContext& ctx) { return op_make({{0, c}}, ctx); }

}  // namespace isopair
