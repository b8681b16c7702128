#include "specbench/specgen.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>

#include "specbench/semantics.hpp"
#include "specbench/syntax.hpp"

namespace specbench {

namespace {

struct Row {
  Family family;
  const char* text;
};

const std::vector<Row> kLetter = {
    {Family::IND, "!(a | b) U (c & (!(d | e) U f))"},
    {Family::IND, "(F b) & (!(c | d) U (e & F f))"},
    {Family::IND, "!(c | d) U ((!e U l) & (F g))"},
    {Family::IND, "!d U ((e | k) & (!g U (h & F i)))"},
    {Family::IND, "!(e | f) U (g & F (h & (!i U j)))"},
    {Family::OOD, "(F a) & (!(b | c) U (d & F (e & (!f U (g & F h)))))"},
    {Family::OOD, "(!a U b) & (!(c | d) U (e & F (f & (!g U (h & F i)))))"},
    {Family::OOD, "!b U ((c | d) & (!e U (f & F (g & (!h U (i & F l))))))"},
    {Family::OOD, "!(c | d) U (e & (!f U (g & F (h & (!i U (j & F k))))))"},
    {Family::OOD, "!d U ((e | f) & (!g U (h & F (i & (!j U (k & F l))))))"},
    {Family::Rsp, "(G F a) & G (a -> (F (b & F c) & (!d U e))) & G !(f | g | h | i)"},
    {Family::Rsp, "(G F f) & G (f -> (F (e & F d) & (!c U b))) & G !(a | g | h | i)"},
    {Family::Rsp, "(G F i) & G (i -> (F (h & F g) & (!b U a))) & G !(c | d | e | f)"},
    {Family::Rec, "G F a & G F b & G F c & G F d & G F e & G !(f | g | h | i | j | k)"},
    {Family::Rec, "G F f & G F g & G F h & G F i & G F j & G !(a | b | c | d | e | k)"},
    {Family::Rec, "G F k & G F a & G F b & G F c & G F d & G !(e | f | g | h | i | j)"},
};

// Zone and Arm (grippers-only) share one column.
const std::vector<Row> kZone = {
    {Family::IND, "!(g | y) U (m & (!g U b))"},
    {Family::IND, "(F y) & (!(y | g) U (b & F m))"},
    {Family::IND, "!(g | y) U ((!g U m) & (F b))"},
    {Family::IND, "!g U ((b | m) & (!g U (y & F b)))"},
    {Family::IND, "!(g | m) U (b & F (m & (!y U g)))"},
    {Family::OOD, "(F y) & (!(y | g) U (b & F (m & (!y U (g & F b)))))"},
    {Family::OOD, "(!g U b) & (!(b | y) U (m & F (g & (!y U (b & F m)))))"},
    {Family::OOD, "!g U ((b | m) & (!g U (y & F (b & (!y U (m & F b))))))"},
    {Family::OOD, "!(y | m) U (b & (!y U (g & F (m & (!g U (y & F b))))))"},
    {Family::OOD, "!m U ((y | g) & (!m U (b & F (m & (!b U (g & F y))))))"},
    {Family::Rsp, "(G F b) & G (b -> F g) & G !(y | m)"},
    {Family::Rsp, "(G F g) & G (g -> F y) & G !(b | m)"},
    {Family::Rsp, "(G F m) & G (m -> F y) & G !(g | b)"},
    {Family::Rec, "G F b & G F g & G !(y | m)"},
    {Family::Rec, "G F g & G F y & G !(b | m)"},
    {Family::Rec, "G F m & G F y & G !(g | b)"},
    {Family::Per, "F G y & G !(g | b | m)"},
    {Family::Per, "F G g & G !(y | b | m)"},
    {Family::Per, "F G b & G !(y | g | m)"},
};

const std::vector<Row> kArmFull = {
    {Family::IND, "!(a_g | a_y) U (g_m & (!a_g U g_b))"},
    {Family::IND, "(F g_y) & (!(a_y | a_g) U (g_b & F g_m))"},
    {Family::IND, "!(a_g | a_y) U ((!a_g U g_m) & (F g_b))"},
    {Family::IND, "!a_g U ((g_b | g_m) & (!a_g U (g_y & F g_b)))"},
    {Family::IND, "!(a_y | a_m) U (g_b & F (g_m & (!a_y U g_g)))"},
    {Family::OOD, "(F g_y) & (!(a_y | a_g) U (g_b & F (g_m & (!a_y U (g_g & F g_b)))))"},
    {Family::OOD, "(!a_g U g_b) & (!(a_b | a_y) U (g_m & F (g_g & (!a_y U (g_b & F g_m)))))"},
    {Family::OOD, "!a_g U ((g_b | g_m) & (!a_g U (g_y & F (g_b & (!a_y U (g_m & F g_b))))))"},
    {Family::OOD, "!(a_y | a_m) U (g_b & (!a_y U (g_g & F (g_m & (!a_g U (g_y & F g_b))))))"},
    {Family::OOD, "!a_m U ((g_y | g_g) & (!a_m U (g_b & F (g_m & (!a_b U (g_g & F g_y))))))"},
};

const std::vector<Row> kZoneMulti = {
    {Family::Indep, "(!(m_0 | y_0) U (b_0 & F g_0)) & (!(b_1 | g_1) U (m_1 & F y_1))"},
    {Family::Indep, "(F b_0) & (!b_0 U (g_0 & F y_0)) & (F g_1) & (!g_1 U (m_1 & F b_1))"},
    {Family::Indep, "(!g_0 U ((b_0 | m_0) & (!g_0 U y_0))) & (!b_1 U ((g_1 | y_1) & (!b_1 U m_1)))"},
    {Family::Coop, "!(m_0 | m_1) U ((b_0 & b_1) & !(y_0 | y_1) U (g_0 & g_1))"},
    {Family::Coop, "F ((b_0 & b_1) & (!(m_0 | m_1) U ((y_0 & y_1) & F (g_0 & g_1))))"},
    {Family::Coop, "F ((b_0 & b_1) & F ((y_0 & y_1) & !(m_0 | m_1) U (g_0 & g_1)))"},
    {Family::Mix, "(!m_0 U y_0) & (!b_1 U m_1) & F ((b_0 & g_1) & F (g_0 & m_1))"},
    {Family::Mix, "(!y_0 U (b_0 & F g_0)) & (!b_1 U g_1) & (!(y_0 | y_1) U (b_0 & b_1))"},
    {Family::Mix, "!m_0 U (b_0 & F (m_1 & F (b_0 & b_1))) & !y_1 U (g_1 & F (y_0 & F (b_0 & b_1)))"},
    {Family::Rsp, "(G F b_0) & (G F g_1) & G (b_0 -> F y_1) & G (g_1 -> F m_0) & G !(y_0 | b_1)"},
    {Family::Rsp, "(G F g_0) & (G F m_1) & G (g_0 -> F y_1) & G (m_1 -> F b_0) & G !(b_1 | m_0)"},
    {Family::Rsp, "(G F m_0) & (G F y_1) & G (m_0 -> F g_1) & G (y_1 -> g_0) & G !(m_1 | b_0)"},
    {Family::Rec, "G F (b_0 & g_1) & G F (g_0 & y_1) & G !(y_0 | m_1)"},
    {Family::Rec, "G F (g_0 & y_1) & G F (y_0 & b_1) & G !(b_0 | m_1)"},
    {Family::Rec, "G F (m_0 & b_1) & G F (b_0 & y_1) & G !(g_0 | g_1)"},
    {Family::Per, "F G (y_0 & m_1) & G !(g_0 | b_0 | y_1 | b_1)"},
    {Family::Per, "F G (g_0 & b_1) & G !(y_0 | b_0 | m_1 | y_1)"},
    {Family::Per, "F G (b_0 & y_1) & G !(y_0 | g_0 | m_1 | b_1)"},
};

struct ComplexityRow {
  Family family;
  int n_seq;
  int n_disj;
  const char* text;
};

const std::vector<ComplexityRow> kComplexity = {
    {Family::ReachOnly, 2, 0, "F (a & F l)"},
    {Family::ReachOnly, 2, 0, "F (d & F g)"},
    {Family::ReachOnly, 2, 0, "F (f & F k)"},
    {Family::ReachOnly, 2, 1, "F ((a | b) & F (k | l))"},
    {Family::ReachOnly, 2, 1, "F ((c | d) & F (g | h))"},
    {Family::ReachOnly, 2, 1, "F ((e | f) & F (i | j))"},
    {Family::ReachOnly, 4, 0, "F (a & F (b & F (c & F d)))"},
    {Family::ReachOnly, 4, 0, "F (e & F (f & F (g & F h)))"},
    {Family::ReachOnly, 4, 0, "F (i & F (j & F (k & F l)))"},
    {Family::ReachOnly, 4, 1, "F ((a | b) & F ((c | d) & F ((e | f) & F (g | h))))"},
    {Family::ReachOnly, 4, 1, "F ((e | f) & F ((g | h) & F ((i | j) & F (k | l))))"},
    {Family::ReachOnly, 4, 1, "F ((i | j) & F ((k | l) & F ((a | b) & F (c | d))))"},
    {Family::ReachAvoid, 2, 0, "!a U (b & (!c U d))"},
    {Family::ReachAvoid, 2, 0, "!e U (f & (!g U h))"},
    {Family::ReachAvoid, 2, 0, "!i U (j & (!k U l))"},
    {Family::ReachAvoid, 2, 1, "!(a | b) U (c & (!(d | e) U f))"},
    {Family::ReachAvoid, 2, 1, "!(e | f) U (g & (!(h | i) U j))"},
    {Family::ReachAvoid, 2, 1, "!(i | j) U (k & (!(l | a) U b))"},
    {Family::ReachAvoid, 4, 0, "!a U (b & (!c U (d & (!e U (f & (!g U h))))))"},
    {Family::ReachAvoid, 4, 0, "!e U (f & (!g U (h & (!i U (j & (!k U l))))))"},
    {Family::ReachAvoid, 4, 0, "!i U (j & (!k U (l & (!a U (b & (!c U d))))))"},
    {Family::ReachAvoid, 4, 1, "!(a | b) U (c & (!(d | e) U (f & (!(g | h) U (i & (!(j | k) U l))))))"},
    {Family::ReachAvoid, 4, 1, "!(e | f) U (g & (!(h | i) U (j & (!(k | l) U (a & (!(b | c) U d))))))"},
    {Family::ReachAvoid, 4, 1, "!(i | j) U (k & (!(l | a) U (b & (!(c | d) U (e & (!(f | g) U h))))))"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<SpecRecord> build(const std::string& prefix, const std::vector<Row>& rows) {
  std::vector<SpecRecord> out;
  std::map<Family, int> counter;
  for (const auto& row : rows) {
    SpecRecord r;
    r.family = row.family;
    r.horizon = horizon_of(row.family);
    r.formula = parse(row.text);
    r.id = prefix + "." + lower(to_string(row.family)) + "." + std::to_string(++counter[row.family]);
    out.push_back(std::move(r));
  }
  return out;
}

const char* corpus_prefix(CorpusEnv env) {
  switch (env) {
    case CorpusEnv::Letter: return "letter";
    case CorpusEnv::Zone: return "zone";
    case CorpusEnv::ArmGrippers: return "arm_grippers";
    case CorpusEnv::ArmGrippersArm: return "arm_full";
    case CorpusEnv::ZoneMulti: return "zone_multi";
  }
  return "letter";
}

Formula disjunction(const std::vector<Proposition>& atoms) {
  std::vector<Formula> fs;
  for (const auto& p : atoms) fs.push_back(Formula::atom(p));
  return make_or(fs);
}

Formula disjunction(const std::vector<std::string>& atoms) {
  std::vector<Formula> fs;
  for (const auto& p : atoms) fs.push_back(Formula::atom(p));
  return make_or(fs);
}

std::vector<Proposition> shuffled(std::vector<Proposition> v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

// Draws `per_stage` atoms for each of `n_seq` stages.
std::vector<std::vector<Proposition>> draw_stages(int n_seq, std::size_t per_stage,
                                                  const std::vector<Proposition>& alphabet,
                                                  Rng& rng, AtomDraw draw, bool exclude_whole_stage) {
  std::vector<std::vector<Proposition>> stages;
  if (draw == AtomDraw::Strict) {
    const std::size_t need = per_stage * static_cast<std::size_t>(n_seq);
    if (need > alphabet.size()) throw InsufficientAlphabet(need, alphabet.size());
    auto pool = shuffled(alphabet, rng);
    for (int s = 0; s < n_seq; ++s) {
      auto first = pool.begin() + static_cast<std::ptrdiff_t>(per_stage * static_cast<std::size_t>(s));
      stages.emplace_back(first, first + static_cast<std::ptrdiff_t>(per_stage));
    }
    return stages;
  }
  for (int s = 0; s < n_seq; ++s) {
    std::vector<Proposition> pool;
    for (const auto& p : alphabet) {
      bool excluded = false;
      if (!stages.empty()) {
        const auto& prev = stages.back();
        excluded = exclude_whole_stage ? std::find(prev.begin(), prev.end(), p) != prev.end()
                                       : prev.back() == p;
      }
      if (!excluded) pool.push_back(p);
    }
    if (per_stage > pool.size()) throw InsufficientAlphabet(per_stage, pool.size());
    pool = shuffled(pool, rng);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(per_stage), pool.end());
    stages.push_back(std::move(pool));
  }
  return stages;
}

void check_params(int n_seq, int n_disj) {
  if (n_seq < 1) throw std::invalid_argument("n_seq must be at least 1");
  if (n_disj < 0) throw std::invalid_argument("n_disj must be non-negative");
}

}  // namespace

InsufficientAlphabet::InsufficientAlphabet(std::size_t needed, std::size_t available)
    : std::invalid_argument("alphabet too small: need " + std::to_string(needed) + " atoms, have " +
                            std::to_string(available)) {}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::IND: return "IND";
    case Family::OOD: return "OOD";
    case Family::ReachOnly: return "ReachOnly";
    case Family::ReachAvoid: return "ReachAvoid";
    case Family::Rsp: return "Rsp";
    case Family::Rec: return "Rec";
    case Family::Per: return "Per";
    case Family::Indep: return "Indep";
    case Family::Coop: return "Coop";
    case Family::Mix: return "Mix";
  }
  return "IND";
}

Family family_from_string(std::string_view s) {
  for (auto f : {Family::IND, Family::OOD, Family::ReachOnly, Family::ReachAvoid, Family::Rsp,
                 Family::Rec, Family::Per, Family::Indep, Family::Coop, Family::Mix}) {
    if (lower(to_string(f)) == lower(s)) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

HorizonKind horizon_of(Family f) noexcept {
  return f == Family::Rsp || f == Family::Rec || f == Family::Per ? HorizonKind::Infinite
                                                                  : HorizonKind::Finite;
}

std::vector<SpecRecord> corpus(CorpusEnv env) {
  switch (env) {
    case CorpusEnv::Letter: return build("letter", kLetter);
    case CorpusEnv::Zone: return build("zone", kZone);
    case CorpusEnv::ArmGrippers: return build("arm_grippers", kZone);
    case CorpusEnv::ArmGrippersArm: return build("arm_full", kArmFull);
    case CorpusEnv::ZoneMulti: return build("zone_multi", kZoneMulti);
  }
  return {};
}

std::vector<SpecRecord> complexity_corpus() {
  std::vector<SpecRecord> out;
  std::map<std::pair<int, int>, int> counter;
  for (const auto& row : kComplexity) {
    SpecRecord r;
    r.family = row.family;
    r.horizon = HorizonKind::Finite;
    r.formula = parse(row.text);
    r.params = SpecParams{row.n_seq, row.n_disj};
    int k = ++counter[{row.family == Family::ReachOnly ? 0 : 1, row.n_seq * 10 + row.n_disj}];
    r.id = std::string(row.family == Family::ReachOnly ? "letter.reach_only" : "letter.reach_avoid") +
           ".s" + std::to_string(row.n_seq) + "d" + std::to_string(row.n_disj) + "." + std::to_string(k);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

const std::vector<std::pair<std::string, CorpusEnv>> kEnvNames = {
    {"letter", CorpusEnv::Letter},
    {"zone", CorpusEnv::Zone},
    {"arm_grippers", CorpusEnv::ArmGrippers},
    {"arm_full", CorpusEnv::ArmGrippersArm},
    {"zone_multi", CorpusEnv::ZoneMulti},
};

}  // namespace

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& [name, env] : kEnvNames) {
    out.push_back(name);
    std::vector<Family> seen;
    for (const auto& r : corpus(env)) {
      if (std::find(seen.begin(), seen.end(), r.family) == seen.end()) {
        seen.push_back(r.family);
        out.push_back(name + "_" + lower(to_string(r.family)));
      }
    }
  }
  out.push_back("letter_reach_only");
  out.push_back("letter_reach_avoid");
  out.push_back("table4");
  return out;
}

std::vector<SpecRecord> corpus_by_name(const std::string& name) {
  if (name == "table4") return complexity_corpus();
  if (name == "letter_reach_only" || name == "letter_reach_avoid") {
    auto want = name == "letter_reach_only" ? Family::ReachOnly : Family::ReachAvoid;
    std::vector<SpecRecord> out;
    for (auto& r : complexity_corpus()) {
      if (r.family == want) out.push_back(std::move(r));
    }
    return out;
  }
  // Longest environment prefix first so zone_multi wins over zone.
  for (auto it = kEnvNames.rbegin(); it != kEnvNames.rend(); ++it) {
    const auto& [env_name, env] = *it;
    if (name == env_name) return corpus(env);
    if (name.rfind(env_name + "_", 0) != 0) continue;
    const std::string fam = name.substr(env_name.size() + 1);
    Family f;
    try {
      f = family_from_string(fam);
    } catch (const std::invalid_argument&) {
      continue;
    }
    std::vector<SpecRecord> out;
    for (auto& r : corpus(env)) {
      if (r.family == f) out.push_back(std::move(r));
    }
    if (!out.empty()) return out;
  }
  throw UnknownCorpus("unknown corpus '" + name + "'");
}

std::string corpus_env_id(const std::string& name) {
  if (name.rfind("zone_multi", 0) == 0) return "zone-multi";
  if (name.rfind("zone", 0) == 0) return "zone-point";
  if (name.rfind("arm_grippers", 0) == 0) return "arm-grippers";
  if (name.rfind("arm_full", 0) == 0) return "arm-full";
  if (name.rfind("letter", 0) == 0 || name == "table4") return "letter";
  throw UnknownCorpus("unknown corpus '" + name + "'");
}

SpecRecord sample_reach_only(int n_seq, int n_disj, const std::vector<Proposition>& alphabet,
                             Rng& rng, AtomDraw draw) {
  check_params(n_seq, n_disj);
  auto stages = draw_stages(n_seq, static_cast<std::size_t>(n_disj + 1), alphabet, rng, draw, true);
  for (auto& s : stages) std::sort(s.begin(), s.end());
  Formula f = make_eventually(disjunction(stages.back()));
  for (int i = n_seq - 2; i >= 0; --i) {
    f = make_eventually(make_and(disjunction(stages[static_cast<std::size_t>(i)]), f));
  }
  SpecRecord r;
  r.id = "reach_only.s" + std::to_string(n_seq) + "d" + std::to_string(n_disj);
  r.formula = f;
  r.family = Family::ReachOnly;
  r.horizon = HorizonKind::Finite;
  r.params = SpecParams{n_seq, n_disj};
  return r;
}

SpecRecord sample_reach_avoid(int n_seq, int n_disj, const std::vector<Proposition>& alphabet,
                              Rng& rng, AtomDraw draw) {
  check_params(n_seq, n_disj);
  // Last atom of each stage is its target.
  auto stages = draw_stages(n_seq, static_cast<std::size_t>(n_disj + 2), alphabet, rng, draw, true);
  auto stage_formula = [&](const std::vector<Proposition>& s, std::optional<Formula> rest) {
    std::vector<Proposition> avoid(s.begin(), s.end() - 1);
    std::sort(avoid.begin(), avoid.end());
    Formula target = Formula::atom(s.back());
    return make_until(make_not(disjunction(avoid)), rest ? make_and(target, *rest) : target);
  };
  Formula f = stage_formula(stages.back(), std::nullopt);
  for (int i = n_seq - 2; i >= 0; --i) f = stage_formula(stages[static_cast<std::size_t>(i)], f);
  SpecRecord r;
  r.id = "reach_avoid.s" + std::to_string(n_seq) + "d" + std::to_string(n_disj);
  r.formula = f;
  r.family = Family::ReachAvoid;
  r.horizon = HorizonKind::Finite;
  r.params = SpecParams{n_seq, n_disj};
  return r;
}

SpecRecord build_infinite(Family family, const InfiniteParams& p,
                          const std::set<Proposition>& alphabet) {
  std::vector<std::string> used;
  auto use = [&](const std::string& a) {
    if (!alphabet.contains(Proposition(a))) throw InsufficientAlphabet(1, 0);
    used.push_back(a);
  };
  std::vector<Formula> parts;
  switch (family) {
    case Family::Rsp: {
      use(p.trigger);
      use(p.response);
      Formula t = Formula::atom(p.trigger);
      parts.push_back(make_always(make_eventually(t)));
      parts.push_back(make_always(make_implies(t, make_eventually(Formula::atom(p.response)))));
      break;
    }
    case Family::Rec:
      if (p.goals.empty()) throw std::invalid_argument("recurrence needs at least one goal");
      for (const auto& g : p.goals) {
        use(g);
        parts.push_back(make_always(make_eventually(Formula::atom(g))));
      }
      break;
    case Family::Per:
      if (p.goals.size() != 1) throw std::invalid_argument("persistence takes exactly one goal");
      use(p.goals[0]);
      parts.push_back(make_eventually(make_always(Formula::atom(p.goals[0]))));
      break;
    default:
      throw std::invalid_argument("build_infinite takes Rsp, Rec or Per");
  }
  for (const auto& a : p.avoid) {
    if (std::find(used.begin(), used.end(), a) != used.end()) {
      throw std::invalid_argument("atom '" + a + "' is both a goal and avoided");
    }
    use(a);
  }
  if (!p.avoid.empty()) parts.push_back(make_always(make_not(disjunction(p.avoid))));
  SpecRecord r;
  r.id = std::string(lower(to_string(family))) + ".built";
  r.formula = make_and(parts);
  r.family = family;
  r.horizon = HorizonKind::Infinite;
  return r;
}

SpecRecord sample_ind(CorpusEnv env, const std::vector<Proposition>& atoms_in, Rng& rng) {
  std::vector<SpecRecord> templates;
  for (auto& r : corpus(env)) {
    if (r.family == Family::IND || r.family == Family::Indep) templates.push_back(std::move(r));
  }
  SpecRecord base = templates[rng.below(templates.size())];
  auto atoms = alphabet(base.formula);
  if (atoms.size() > atoms_in.size()) throw InsufficientAlphabet(atoms.size(), atoms_in.size());
  auto pool = shuffled(atoms_in, rng);
  std::map<std::string, std::string> rename;
  std::size_t k = 0;
  for (const auto& a : atoms) rename[a.name()] = pool[k++].name();
  base.formula = rename_atoms(base.formula, [&](const std::string& s) { return rename.at(s); });
  base.id += ".sample";
  return base;
}

void write_corpus(std::ostream& out, const std::vector<SpecRecord>& specs) {
  out << "# id\tformula\tfamily\thorizon\tn_seq\tn_disj\n";
  for (const auto& r : specs) {
    out << r.id << '\t' << format(r.formula) << '\t' << to_string(r.family) << '\t'
        << (r.horizon == HorizonKind::Finite ? "finite" : "infinite") << '\t';
    if (r.params) {
      out << r.params->n_seq << '\t' << r.params->n_disj;
    } else {
      out << "-\t-";
    }
    out << '\n';
  }
}

std::vector<SpecRecord> read_corpus(std::istream& in) {
  std::vector<SpecRecord> out;
  for (auto& line : read_spec_file(in)) {
    SpecRecord r;
    r.id = line.id;
    r.formula = line.formula;
    if (!line.extra.empty()) {
      r.family = family_from_string(line.extra[0]);
    } else {
      // Without a family column: anything with G in NNF is treated as an
      // infinite-horizon task.
      bool has_always = false;
      std::vector<Formula> stack{nnf(r.formula)};
      while (!stack.empty()) {
        Formula f = stack.back();
        stack.pop_back();
        if (f.op() == Op::Always) has_always = true;
        if (f.is_unary()) stack.push_back(f.lhs());
        if (f.is_binary()) {
          stack.push_back(f.lhs());
          stack.push_back(f.rhs());
        }
      }
      r.family = has_always ? Family::Rec : Family::IND;
    }
    r.horizon = horizon_of(r.family);
    if (line.extra.size() >= 4 && line.extra[2] != "-") {
      r.params = SpecParams{std::stoi(line.extra[2]), std::stoi(line.extra[3])};
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace specbench
