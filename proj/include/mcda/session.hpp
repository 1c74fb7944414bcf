#pragma once

// In-memory elicitation sessions: a problem, an editable statement list,
// cached analyses and one background SMAA job.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mcda/dataio.hpp"
#include "mcda/errors.hpp"
#include "mcda/preference.hpp"
#include "mcda/smaa.hpp"

namespace mcda {

class NotFound : public Error {
 public:
  using Error::Error;
};

/// The request clashes with the current state, e.g. a job already running.
class Conflict : public Error {
 public:
  using Error::Error;
};

/// Well-formed request that the current data cannot satisfy.
class Unprocessable : public Error {
 public:
  using Error::Error;
};

struct StatementEntry {
  std::uint64_t id = 0;
  PreferenceStatement statement;
};

enum class JobState { idle, running, done, failed, cancelled };

std::string_view to_string(JobState s);

struct JobStatus {
  JobState state = JobState::idle;
  std::size_t done = 0;
  std::size_t total = 0;
  std::uint64_t version = 0;  // statement-set version the job was started on
  std::string error;

  double fraction() const noexcept { return total == 0 ? 0.0 : static_cast<double>(done) / total; }
};

/// Statements with the feasibility they imply, taken under one lock.
struct StatementSnapshot {
  std::uint64_t version = 0;
  std::vector<StatementEntry> statements;
  ConsistencyResult consistency;
  std::optional<InconsistencyDiagnostic> diagnostic;  // removal sets as statement ids
};

struct SmaaOutcome {
  SmaaResult result;
  SamplerConfig config;
  std::uint64_t version = 0;
};

class Session {
 public:
  explicit Session(std::string id);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const noexcept { return id_; }
  /// Bumped by every change to the problem or the statements.
  std::uint64_t version() const;
  bool has_problem() const;
  Problem problem() const;

  /// Replaces the problem; its statements become the session statements.
  void set_problem(Problem problem);
  std::vector<StatementEntry> statements() const;
  /// One statement record; a chain adds several entries. Returns their ids.
  std::vector<std::uint64_t> add_statement(const nlohmann::json& record);
  void remove_statement(std::uint64_t id);

  ConsistencyResult consistency();
  /// Removal sets given as statement ids; nullopt when the statements are consistent.
  std::optional<InconsistencyDiagnostic> diagnostic();
  StatementSnapshot snapshot();
  DominanceMatrix dominance();
  NapRelation nap(const NodeId& node);

  /// Starts sampling in the background. Throws Conflict while a job runs and
  /// Unprocessable when no compatible capacity exists.
  void start_smaa(const SamplerConfig& cfg, std::vector<NodeId> nodes);
  JobStatus smaa_status() const;
  /// Throws NotFound when no job has finished, Conflict while one runs.
  std::shared_ptr<const SmaaOutcome> smaa_result() const;
  /// Returns false when no job was running.
  bool cancel_smaa();

 private:
  struct Job;

  void require_problem() const;
  void changed();
  const LinearConstraintSystem& system();
  const ConsistencyResult& consistency_locked();
  std::optional<InconsistencyDiagnostic> diagnostic_locked();
  void stop_job();

  std::string id_;
  mutable std::mutex m_;
  std::optional<Problem> problem_;
  std::vector<StatementEntry> statements_;
  std::uint64_t next_statement_id_ = 1;
  std::uint64_t version_ = 0;
  std::optional<LinearConstraintSystem> system_;
  std::optional<ConsistencyResult> consistency_;
  std::optional<DominanceMatrix> dominance_;
  std::map<NodeId, NapRelation> nap_;
  std::unique_ptr<Job> job_;
};

class SessionRegistry {
 public:
  std::shared_ptr<Session> create();
  /// Throws NotFound.
  std::shared_ptr<Session> find(const std::string& id) const;
  /// Cancels the session's job. Returns false for an unknown id.
  bool erase(const std::string& id);
  std::size_t size() const;

 private:
  mutable std::mutex m_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace mcda
