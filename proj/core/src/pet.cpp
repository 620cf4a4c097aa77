#include "ulab/pet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ulab {
namespace {

IntVec basis(std::size_t dim, int t) {
  IntVec e(dim, 0);
  e[static_cast<std::size_t>(t - 1)] = 1;
  return e;
}

// Leading coefficient in n, as a polynomial in h.
MultiPoly leading(const MultiPoly& q) { return q.n_coefficient(q.n_degree()); }

bool weight_less(const std::vector<int>& a, const std::vector<int>& b) {
  // both indexed so that position 0 is the highest degree of the pair
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<int> aligned(const std::vector<int>& w, std::size_t len) {
  std::vector<int> out(len - w.size(), 0);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::int64_t multinomial_with_one(const MultiPoly::Exponent& u) {
  // (|u|+1)! / (u_1! ... u_k! 1!)
  int total = 1;
  std::int64_t r = 1;
  for (std::size_t i = 1; i < u.size(); ++i) {
    for (int t = 1; t <= u[i]; ++t) {
      ++total;
      r = checked_mul(r, total) / t;
    }
  }
  return r;
}

}  // namespace

void PolyFamily::validate() const {
  if (members.size() != provenance.size()) throw Error(ErrorCode::size_mismatch, "provenance length differs from family size");
  for (const auto& q : members)
    if (q.h_count() > h_count) throw Error(ErrorCode::invalid_argument, "member uses an inactive h variable");
}

PolyFamily initial_family(const ProgressionConfig& pc, bool symbolic) {
  PolyFamily f;
  const std::size_t l = static_cast<std::size_t>(pc.length());
  for (int j = 1; j <= pc.length(); ++j) {
    const IntVec v = symbolic ? basis(l, pc.eta()[static_cast<std::size_t>(j - 1)]) : pc.vector_for(j);
    f.members.push_back(MultiPoly::from_vec_poly(IntVecPoly::scaled(v, pc.poly(j))));
    f.provenance.push_back(j);
  }
  return f;
}

PolyFamily vdc_step(const PolyFamily& f, int m) {
  f.validate();
  if (m < 1 || m > static_cast<int>(f.size())) throw Error(ErrorCode::invalid_argument, "vdc_step index out of range");
  const MultiPoly qm = tilde(f.members[static_cast<std::size_t>(m - 1)]);
  if (qm.is_zero()) throw Error(ErrorCode::invalid_argument, "chosen member is constant in n");
  PolyFamily out;
  out.h_count = f.h_count + 1;
  std::set<std::map<MultiPoly::Exponent, IntVec>> seen;
  auto push = [&](MultiPoly q, int prov) {
    if (q.is_zero() || !seen.insert(q.terms()).second) return;
    out.members.push_back(std::move(q));
    out.provenance.push_back(prov);
  };
  for (std::size_t j = 0; j < f.size(); ++j) {
    const MultiPoly qj = tilde(f.members[j]);
    push(qj - qm, f.provenance[j]);
    push(tilde(qj.shift_n(out.h_count)) - qm, f.provenance[j]);
  }
  if (out.members.empty()) throw Error(ErrorCode::family_collapsed, "family collapsed");
  return out;
}

bool is_nice(const PolyFamily& f) {
  if (f.members.empty()) return false;
  int top = -1;
  for (const auto& q : f.members) top = std::max(top, q.n_degree());
  if (f.members.back().n_degree() != top) return false;
  // a difference is constant in n iff the parts that involve n agree
  std::set<std::map<MultiPoly::Exponent, IntVec>> moving;
  for (const auto& q : f.members) {
    std::map<MultiPoly::Exponent, IntVec> part;
    for (const auto& [e, c] : q.terms())
      if (!e.empty() && e[0] > 0) part.emplace(e, c);
    if (!moving.insert(std::move(part)).second) return false;
  }
  return true;
}

std::vector<int> pet_weight(const PolyFamily& f) {
  int top = 0;
  for (const auto& q : f.members) top = std::max(top, q.n_degree());
  std::vector<int> w;
  for (int d = top; d >= 1; --d) {
    std::set<std::map<MultiPoly::Exponent, IntVec>> classes;
    for (const auto& q : f.members)
      if (q.n_degree() == d) classes.insert(leading(q).terms());
    w.push_back(static_cast<int>(classes.size()));
  }
  return w;
}

int choose_m(const PolyFamily& f) {
  int best = 0, best_deg = 0;
  bool nonlinear = false;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const int d = f.members[j].n_degree();
    nonlinear = nonlinear || d >= 2;
    if (d >= 1 && (best == 0 || d < best_deg)) {
      best = static_cast<int>(j) + 1;
      best_deg = d;
    }
  }
  return nonlinear ? best : 0;
}

PetResult pet_run(const PolyFamily& input, int max_steps, std::size_t max_members) {
  input.validate();
  if (!is_nice(input)) throw Error(ErrorCode::not_distinct, "input family is not nice");
  for (const auto& q : input.members)
    if (q.n_degree() < 1) throw Error(ErrorCode::invalid_argument, "family members must be nonconstant in n");

  PetResult r;
  r.distinguished = input.provenance.back();
  r.history.push_back(input);
  PolyFamily cur = input;
  while (int m = choose_m(cur)) {
    if (static_cast<int>(r.steps.size()) == max_steps) throw Error(ErrorCode::max_steps, "PET exceeded max_steps");
    PolyFamily next = vdc_step(cur, m);
    if (next.size() > max_members)
      throw Error(ErrorCode::cost_cap, "PET family grew past " + std::to_string(max_members) + " members after " +
                                           std::to_string(r.steps.size() + 1) + " steps");
    const auto wa = pet_weight(cur), wb = pet_weight(next);
    const std::size_t len = std::max(wa.size(), wb.size());
    if (!weight_less(aligned(wb, len), aligned(wa, len)))
      throw Error(ErrorCode::invalid_argument, "PET weight failed to decrease");
    if (next.provenance.back() != r.distinguished)
      throw Error(ErrorCode::provenance_lost, "member carrying the distinguished function was lost");
    r.steps.push_back(m);
    r.history.push_back(next);
    cur = std::move(next);
  }
  if (!is_nice(cur)) throw Error(ErrorCode::not_distinct, "final family is not nice");
  r.final_family = cur;
  r.s_prime = static_cast<int>(r.steps.size());

  std::vector<MultiPoly> beta;
  for (const auto& q : cur.members) beta.push_back(q.n_coefficient(1));
  const MultiPoly& last = beta.back();
  r.directions.push_back(last);
  for (std::size_t j = 0; j + 1 < beta.size(); ++j) r.directions.push_back(last - beta[j]);
  for (const auto& c : r.directions)
    if (c.is_zero()) throw Error(ErrorCode::not_distinct, "zero direction polynomial");
  r.s = static_cast<int>(r.directions.size());
  return r;
}

AuditResult pet_coefficient_audit(const PetResult& result, const PolyFamily& initial) {
  AuditResult out;
  out.ok = true;
  int d = 0, l = 0;
  for (std::size_t j = 0; j < initial.size(); ++j) {
    d = std::max(d, initial.members[j].n_degree());
    l = std::max(l, initial.provenance[j]);
  }
  const std::size_t dim = initial.members.front().dimension();
  auto a = [&](int j, int i) -> IntVec {
    for (std::size_t k = 0; k < initial.size(); ++k)
      if (initial.provenance[k] == j) return initial.members[k].coefficient({i});
    return IntVec(dim, 0);
  };
  const int sp = result.s_prime;
  const int lstar = result.distinguished;

  // exponents with support exactly S and total degree <= d-1
  auto exponents = [&](const std::vector<int>& support) {
    std::vector<MultiPoly::Exponent> outv;
    MultiPoly::Exponent u(static_cast<std::size_t>(sp + 1), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int budget) {
      if (k == support.size()) {
        outv.push_back(u);
        return;
      }
      for (int e = 1; e <= budget - static_cast<int>(support.size() - k - 1); ++e) {
        u[static_cast<std::size_t>(support[k])] = e;
        rec(k + 1, budget - e);
      }
      u[static_cast<std::size_t>(support[k])] = 0;
    };
    rec(0, d - 1);
    return outv;
  };
  std::vector<std::vector<int>> supports;
  std::function<void(int, std::vector<int>&)> gen = [&](int start, std::vector<int>& cur) {
    supports.push_back(cur);
    if (static_cast<int>(cur.size()) == d - 1) return;
    for (int i = start; i <= sp; ++i) {
      cur.push_back(i);
      gen(i + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<int> empty;
  gen(1, empty);

  for (const auto& c : result.directions) {
    std::map<std::vector<int>, std::set<int>> allowed;
    bool dir_ok = true;
    for (const auto& [e, coeff] : c.terms()) {
      int deg = 0;
      for (std::size_t i = 1; i < e.size(); ++i) deg += e[i];
      if ((!e.empty() && e[0] != 0) || deg > d - 1) dir_ok = false;
    }
    for (const auto& S : supports) {
      std::set<int> ws;
      const auto us = exponents(S);
      for (int w = 0; w <= l; ++w) {
        bool good = true;
        for (const auto& u : us) {
          int deg = 0;
          for (std::size_t i = 1; i < u.size(); ++i) deg += u[i];
          const std::int64_t cu = multinomial_with_one(u);
          const IntVec al = a(lstar, deg + 1), aw = a(w, deg + 1);
          IntVec expect(dim);
          for (std::size_t t = 0; t < dim; ++t) expect[t] = checked_mul(cu, al[t] - aw[t]);
          if (c.coefficient(u) != expect) {
            good = false;
            break;
          }
        }
        if (good) ws.insert(w);
      }
      if (ws.empty()) dir_ok = false;
      if (S.size() == 1) out.per_variable[S[0]].insert(ws.begin(), ws.end());
      allowed.emplace(S, std::move(ws));
    }
    out.allowed.push_back(std::move(allowed));
    out.ok = out.ok && dir_ok;
  }
  return out;
}

AuditResult pet_coefficient_audit(const PetResult& result, const ProgressionConfig& pc) {
  const bool symbolic = result.history.front().members.front().dimension() != static_cast<std::size_t>(pc.cfg().dimension()) ||
                        result.history.front().members == initial_family(pc, true).members;
  return pet_coefficient_audit(result, initial_family(pc, symbolic));
}

ExtractedDirections extract_directions(const ProgressionConfig& pc) {
  const PolyFamily fam = initial_family(pc, false);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (fam.members[i].is_constant_in_n()) throw Error(ErrorCode::not_distinct, "not essentially distinct");
    for (std::size_t j = i + 1; j < fam.size(); ++j)
      if ((fam.members[i] - fam.members[j]).is_constant_in_n()) throw Error(ErrorCode::not_distinct, "not essentially distinct");
  }
  ExtractedDirections out;
  const MultiPoly& last = fam.members.back();
  for (int j = 0; j < pc.length(); ++j) {
    const MultiPoly diff = j == 0 ? last : last - fam.members[static_cast<std::size_t>(j - 1)];
    const IntVec lead = diff.coefficient({diff.n_degree()});
    if (std::all_of(lead.begin(), lead.end(), [](auto c) { return c == 0; }))
      throw Error(ErrorCode::not_distinct, "zero direction vector");
    out.vectors.push_back(lead);
    out.reduced.push_back(pc.cfg().reduce(lead));
  }
  out.multiplicity = pet_run(fam).s;
  return out;
}

PetBoundResult pet_bound_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  const auto& cfg = pc.cfg();
  const PetResult pet = pet_run(initial_family(pc, false));
  PetBoundResult r;
  r.s = pet.s;
  r.s_prime = pet.s_prime;
  const int p = cfg.prime();
  const double hs = std::pow(static_cast<double>(p), r.s_prime);
  check_cost(hs * std::pow(static_cast<double>(p), r.s - 1) * static_cast<double>(cfg.order()) * r.s, "PET bound");

  r.lambda_abs = std::abs(counting_operator(pc, fs));
  const GroupFunction& fl = fs.at(static_cast<std::size_t>(pc.length()));
  std::map<Index, Subgroup> cache;
  auto line = [&](const IntVec& v) -> const Subgroup& {
    const FpPoint x = cfg.reduce(v);
    const Index key = cfg.index(x);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, x.is_zero() ? subgroup_span(cfg, {}) : cyclic(cfg, x)).first;
    return it->second;
  };

  std::vector<std::int64_t> vals(static_cast<std::size_t>(r.s_prime + 1), 0);
  double sum_pow = 0, sum_norm = 0;
  const std::size_t total = static_cast<std::size_t>(hs);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t t = k;
    for (int i = 1; i <= r.s_prime; ++i) {
      vals[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(t % static_cast<std::size_t>(p));
      t /= static_cast<std::size_t>(p);
    }
    DirectionSpec dirs;
    for (const auto& c : pet.directions) dirs.push_back(line(c.evaluate_mod(vals, p)));
    const double avg = box_average(fl, dirs);
    sum_pow += avg;
    sum_norm += std::pow(avg, 1.0 / std::ldexp(1.0, r.s));
  }
  r.rhs = sum_pow / hs;
  r.rhs_norm = sum_norm / hs;
  r.lhs = std::pow(r.lambda_abs, std::ldexp(1.0, r.s_prime));
  r.lhs_holder = std::pow(r.lambda_abs, std::ldexp(1.0, r.s_prime + r.s));
  r.norm_form_ok = r.lhs <= r.rhs_norm + kTolerance;
  r.holder_form_ok = r.lhs_holder <= r.rhs + kTolerance;
  r.literal_ok = r.lhs <= r.rhs + kTolerance;
  r.ok = r.norm_form_ok && r.holder_form_ok;
  return r;
}

InequalityResult linear_average_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  const auto& cfg = pc.cfg();
  std::vector<FpPoint> w;
  for (int j = 1; j <= pc.length(); ++j) {
    const IntPoly q = pc.poly(j);
    if (degree(q) != 1 || q[0] != 0) throw Error(ErrorCode::invalid_argument, "linear averages need p_j(n) = a_j n");
    IntVec v = pc.vector_for(j);
    for (auto& c : v) c = checked_mul(c, q[1]);
    w.push_back(cfg.reduce(v));
  }
  std::vector<FpPoint> dirs{w.back()};
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    IntVec d(w.back().coords.begin(), w.back().coords.end());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] -= w[j].coords[t];
    dirs.push_back(cfg.reduce(d));
  }
  for (const auto& d : dirs)
    if (d.is_zero()) throw Error(ErrorCode::zero_direction, "linear average direction vanishes mod p");
  InequalityResult r;
  r.lhs = std::abs(counting_operator(pc, fs));
  r.rhs = box_norm(fs.at(static_cast<std::size_t>(pc.length())), directions(cfg, dirs));
  r.ok = r.lhs <= r.rhs + kTolerance;
  return r;
}

std::string format_family(const PolyFamily& f, bool symbolic) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i)
    os << (i ? ", " : "") << format_poly(f.members[i], symbolic);
  return os.str();
}

}  // namespace ulab
