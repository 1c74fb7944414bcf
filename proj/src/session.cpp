#include "mcda/session.hpp"

#include <algorithm>
#include <random>

#include "mcda/pipeline.hpp"

namespace mcda {

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::idle: return "idle";
    case JobState::running: return "running";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
    case JobState::cancelled: return "cancelled";
  }
  return "idle";
}

struct Session::Job {
  std::atomic<std::size_t> done{0};
  std::atomic<std::size_t> total{0};
  mutable std::mutex m;
  JobState state = JobState::running;
  std::string error;
  std::shared_ptr<const SmaaOutcome> outcome;
  std::uint64_t version = 0;
  std::jthread thread;  // declared last: joined before the rest is destroyed
};

Session::Session(std::string id) : id_(std::move(id)) {}

Session::~Session() { stop_job(); }

std::uint64_t Session::version() const {
  std::lock_guard lock(m_);
  return version_;
}

bool Session::has_problem() const {
  std::lock_guard lock(m_);
  return problem_.has_value();
}

void Session::require_problem() const {
  if (!problem_) throw Unprocessable("session has no problem loaded");
}

Problem Session::problem() const {
  std::lock_guard lock(m_);
  require_problem();
  Problem p = *problem_;
  p.statements.clear();
  p.statement_records.clear();
  for (const auto& e : statements_) {
    p.statement_records.push_back(p.statements.size());
    p.statements.push_back(e.statement);
  }
  p.record_count = p.statements.size();
  return p;
}

void Session::stop_job() {
  if (job_ && job_->thread.joinable()) {
    job_->thread.request_stop();
    job_->thread.join();
  }
}

void Session::changed() {
  ++version_;
  system_.reset();
  consistency_.reset();
  nap_.clear();
  stop_job();
  job_.reset();
}

void Session::set_problem(Problem problem) {
  std::lock_guard lock(m_);
  statements_.clear();
  for (auto& st : problem.statements) statements_.push_back({next_statement_id_++, std::move(st)});
  problem.statements.clear();
  problem.statement_records.clear();
  problem.record_count = 0;
  problem_ = std::move(problem);
  dominance_.reset();
  changed();
}

std::vector<StatementEntry> Session::statements() const {
  std::lock_guard lock(m_);
  return statements_;
}

std::vector<std::uint64_t> Session::add_statement(const nlohmann::json& record) {
  std::lock_guard lock(m_);
  require_problem();
  const auto parsed = statements_from_json(nlohmann::json::array({record}), problem_->hierarchy, &problem_->table);
  std::vector<std::uint64_t> ids;
  for (const auto& st : parsed) {
    ids.push_back(next_statement_id_);
    statements_.push_back({next_statement_id_++, st});
  }
  changed();
  return ids;
}

void Session::remove_statement(std::uint64_t id) {
  std::lock_guard lock(m_);
  const auto it = std::find_if(statements_.begin(), statements_.end(), [&](const auto& e) { return e.id == id; });
  if (it == statements_.end()) throw NotFound("no statement with id " + std::to_string(id));
  statements_.erase(it);
  changed();
}

const LinearConstraintSystem& Session::system() {
  require_problem();
  if (!system_) {
    std::vector<PreferenceStatement> sts;
    for (const auto& e : statements_) sts.push_back(e.statement);
    system_ = assemble_edm(sts, problem_->hierarchy, &problem_->table);
  }
  return *system_;
}

const ConsistencyResult& Session::consistency_locked() {
  if (!consistency_) consistency_ = check_consistency(system());
  return *consistency_;
}

ConsistencyResult Session::consistency() {
  std::lock_guard lock(m_);
  return consistency_locked();
}

std::optional<InconsistencyDiagnostic> Session::diagnostic_locked() {
  if (consistency_locked().feasible) return std::nullopt;
  std::vector<PreferenceStatement> sts;
  for (const auto& e : statements_) sts.push_back(e.statement);
  auto d = diagnose_inconsistency(sts, problem_->hierarchy, &problem_->table);
  for (auto& set : d.removals) {
    for (auto& k : set) k = statements_[k].id;
  }
  return d;
}

std::optional<InconsistencyDiagnostic> Session::diagnostic() {
  std::lock_guard lock(m_);
  return diagnostic_locked();
}

StatementSnapshot Session::snapshot() {
  std::lock_guard lock(m_);
  StatementSnapshot s;
  s.version = version_;
  s.statements = statements_;
  s.consistency = consistency_locked();
  s.diagnostic = diagnostic_locked();
  return s;
}

DominanceMatrix Session::dominance() {
  std::lock_guard lock(m_);
  require_problem();
  if (!dominance_) dominance_ = mcda::dominance(problem_->table);
  return *dominance_;
}

NapRelation Session::nap(const NodeId& node) {
  std::lock_guard lock(m_);
  require_problem();
  if (problem_->hierarchy.node(node).is_leaf()) {
    throw InvalidArgument("node " + node.str() + " is an elementary criterion");
  }
  const auto it = nap_.find(node);
  if (it != nap_.end()) return it->second;
  auto nap = nap_relation(system(), problem_->hierarchy, problem_->table, node);
  nap_.emplace(node, nap);
  return nap;
}

void Session::start_smaa(const SamplerConfig& cfg, std::vector<NodeId> nodes) {
  std::lock_guard lock(m_);
  require_problem();
  cfg.check();
  if (job_) {
    std::lock_guard jl(job_->m);
    if (job_->state == JobState::running) throw Conflict("an SMAA job is already running");
  }
  if (!consistency_locked().feasible) throw Unprocessable("the statements admit no compatible capacity");
  for (const auto& n : nodes) {
    if (problem_->hierarchy.node(n).is_leaf()) throw InvalidArgument("node " + n.str() + " is an elementary criterion");
  }
  stop_job();
  job_ = std::make_unique<Job>();
  Job* job = job_.get();
  job->version = version_;
  job->thread = std::jthread([job, sys = system(), h = problem_->hierarchy, table = problem_->table,
                              nodes = std::move(nodes), cfg](std::stop_token stop) {
    try {
      auto result = run_smaa(sys, h, table, nodes, cfg, [&](std::size_t done, std::size_t total) {
        job->total = total;
        job->done = done;
        return !stop.stop_requested();
      });
      auto outcome = std::make_shared<SmaaOutcome>(SmaaOutcome{std::move(result), cfg, job->version});
      std::lock_guard jl(job->m);
      job->outcome = std::move(outcome);
      job->done = job->total.load();
      job->state = JobState::done;
    } catch (const Cancelled&) {
      std::lock_guard jl(job->m);
      job->state = JobState::cancelled;
    } catch (const std::exception& e) {
      std::lock_guard jl(job->m);
      job->state = JobState::failed;
      job->error = e.what();
    }
  });
}

JobStatus Session::smaa_status() const {
  std::lock_guard lock(m_);
  JobStatus s;
  if (!job_) return s;
  std::lock_guard jl(job_->m);
  s.state = job_->state;
  s.done = job_->done;
  s.total = job_->total;
  s.version = job_->version;
  s.error = job_->error;
  return s;
}

std::shared_ptr<const SmaaOutcome> Session::smaa_result() const {
  std::lock_guard lock(m_);
  if (!job_) throw NotFound("no SMAA result for the current statements");
  std::lock_guard jl(job_->m);
  switch (job_->state) {
    case JobState::running: throw Conflict("the SMAA job is still running");
    case JobState::failed: throw Unprocessable("the SMAA job failed: " + job_->error);
    case JobState::done: return job_->outcome;
    default: throw NotFound("no SMAA result for the current statements");
  }
}

bool Session::cancel_smaa() {
  std::lock_guard lock(m_);
  if (!job_) return false;
  {
    std::lock_guard jl(job_->m);
    if (job_->state != JobState::running) return false;
  }
  stop_job();
  return true;
}

std::shared_ptr<Session> SessionRegistry::create() {
  static std::mutex rng_m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::string id;
  {
    std::lock_guard lock(rng_m);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    id = buf;
  }
  auto s = std::make_shared<Session>(id);
  std::lock_guard lock(m_);
  sessions_.emplace(id, s);
  return s;
}

std::shared_ptr<Session> SessionRegistry::find(const std::string& id) const {
  std::lock_guard lock(m_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("no session " + id);
  return it->second;
}

bool SessionRegistry::erase(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(m_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    s = std::move(it->second);
    sessions_.erase(it);
  }
  s->cancel_smaa();
  return true;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(m_);
  return sessions_.size();
}

}  // namespace mcda
