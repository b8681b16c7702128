#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbench/formula.hpp"
#include "specbench/rng.hpp"

namespace specbench {

enum class Family { IND, OOD, ReachOnly, ReachAvoid, Rsp, Rec, Per, Indep, Coop, Mix };
enum class HorizonKind { Finite, Infinite };

std::string_view to_string(Family f) noexcept;
Family family_from_string(std::string_view s);
HorizonKind horizon_of(Family f) noexcept;

struct SpecParams {
  int n_seq = 0;
  int n_disj = 0;
};

struct SpecRecord {
  std::string id;
  Formula formula;
  Family family = Family::IND;
  HorizonKind horizon = HorizonKind::Finite;
  std::optional<SpecParams> params;
};

enum class CorpusEnv { Letter, Zone, ArmGrippers, ArmGrippersArm, ZoneMulti };

class InsufficientAlphabet : public std::invalid_argument {
 public:
  InsufficientAlphabet(std::size_t needed, std::size_t available);
};

class UnknownCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed evaluation lists, one entry per table row, in table order.
std::vector<SpecRecord> corpus(CorpusEnv env);
/// Letter reach-only and reach-avoid rows with n_seq in {2, 4}, n_disj in {0, 1}.
std::vector<SpecRecord> complexity_corpus();

/// Named corpora: `<env>` for everything of one environment or
/// `<env>_<family>`, with env in letter, zone, arm_grippers, arm_full,
/// zone_multi; plus letter_reach_only, letter_reach_avoid and table4.
std::vector<SpecRecord> corpus_by_name(const std::string& name);
std::vector<std::string> corpus_names();
/// Environment registry id a named corpus is meant for.
std::string corpus_env_id(const std::string& name);

/// How stages choose atoms. Strict: without replacement across the whole
/// formula. Reuse: without replacement inside a stage and never repeating the
/// previous stage's atoms, so long chains fit small alphabets.
enum class AtomDraw { Strict, Reuse };

/// F(s1 & F(s2 & ... F sn)), each stage a disjunction of n_disj + 1 atoms.
SpecRecord sample_reach_only(int n_seq, int n_disj, const std::vector<Proposition>& alphabet,
                             Rng& rng, AtomDraw draw = AtomDraw::Strict);
/// !(A1) U (t1 & (!(A2) U (t2 & ...))), each avoid set n_disj + 1 atoms and
/// a single target per stage.
SpecRecord sample_reach_avoid(int n_seq, int n_disj, const std::vector<Proposition>& alphabet,
                              Rng& rng, AtomDraw draw = AtomDraw::Strict);

struct InfiniteParams {
  /// Rec: recurring goals. Per: the persistent goal (first entry).
  std::vector<std::string> goals;
  /// Rsp: trigger and response atoms.
  std::string trigger;
  std::string response;
  std::vector<std::string> avoid;
};

/// Rsp: (G F t) & G(t -> F r) & G !(avoid)
/// Rec: G F g1 & ... & G F gn & G !(avoid)
/// Per: F G g & G !(avoid)
SpecRecord build_infinite(Family family, const InfiniteParams& params,
                          const std::set<Proposition>& alphabet);

/// One of the environment's IND templates with atoms re-randomized over
/// `alphabet` (injective renaming).
SpecRecord sample_ind(CorpusEnv env, const std::vector<Proposition>& alphabet, Rng& rng);

/// Spec-file export with family, horizon, n_seq and n_disj columns.
void write_corpus(std::ostream& out, const std::vector<SpecRecord>& specs);
/// Reads a spec file; extra columns (family, ...) are used when present.
std::vector<SpecRecord> read_corpus(std::istream& in);

}  // namespace specbench
