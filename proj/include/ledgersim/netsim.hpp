// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

#include "ledgersim/flows.hpp"
#include "ledgersim/ledger.hpp"

namespace ledgersim::netsim {

enum class NodeRole : std::uint8_t { HmrcCwp, BuyerCwp, SellerCwp, LegalCwp, Notary };
enum class SchedulerMode : std::uint8_t { Deterministic, Concurrent };

const char* to_string(NodeRole role);
NodeRole node_role_from_string(const std::string& name);

struct NodeConfig {
    NodeId name;
    NodeRole role = NodeRole::BuyerCwp;
    int workers = 0;  // 0: use the network default
};

struct FaultSpec {
    enum class Kind : std::uint8_t { DropSession, Delay, NodePause };
    Kind kind = Kind::Delay;
    NodeId a;  // DropSession: one endpoint; NodePause: the node
    NodeId b;  // DropSession: other endpoint
    double delay_ms = 0;

    static FaultSpec drop_session(NodeId a, NodeId b);
    static FaultSpec delay(double ms);
    static FaultSpec node_pause(NodeId node);
};

/// Hands the legal-authority responder its decision on a warrant
/// request. The default approves everything, which is the behaviour the
/// assertion scenarios assume.
using ApprovalPolicy = std::function<bool(const DataAccessRequestState&)>;

struct NetworkConfig {
    std::vector<NodeConfig> nodes;
    SchedulerMode mode = SchedulerMode::Deterministic;
    std::uint64_t seed = 0;
    double latency_ms = 0;
    double jitter_ms = 0;
    contracts::ContractConfig contracts;
    std::size_t client_queue_limit = 16384;
    int default_workers = 2;
    std::vector<FaultSpec> fault_schedule;
    ApprovalPolicy approval_policy;  // null: approve all

    /// The five standard roles under their conventional names.
    static NetworkConfig standard(SchedulerMode mode = SchedulerMode::Deterministic,
                                  std::uint64_t seed = 0);
    static NetworkConfig from_json(const nlohmann::json& doc);
    static NetworkConfig from_json_file(const std::string& path);
};

using SessionId = std::uint64_t;
using FlowId = std::uint64_t;
using ClientId = std::uint64_t;

struct FlowHandle {
    FlowId id = 0;
};

// ---------------------------------------------------------------------------
// wire messages

struct FlowStart {
    FlowId flow = 0;
    flows::FlowRequest request;
};
struct SignRequest {
    TxCorePtr tx;
    AccountId signer = 0;
};
struct SignResponse {
    AccountId signer = 0;
    Signature signature;
};
struct SignRefused {
    Violation violation;
};
struct NotarizeRequest {
    SignedTransaction tx;
};
struct NotarizeOk {
    NotaryResult result;
    Signature notary_signature;
};
struct NotarizeFailed {
    Errc code = Errc::NotaryError;
    std::string message;
};
struct RecordRequest {
    TxCorePtr tx;
};
struct RecordAck {};
struct WarrantDataRequest {
    StateRef warrant_ref;
    StatePtr warrant;
};
struct WarrantDataResponse {
    std::vector<StatePtr> states;
};
struct SessionClosed {
    std::string reason;
};

using MsgBody = std::variant<FlowStart, SignRequest, SignResponse, SignRefused, NotarizeRequest,
                             NotarizeOk, NotarizeFailed, RecordRequest, RecordAck,
                             WarrantDataRequest, WarrantDataResponse, SessionClosed>;

struct Envelope {
    SessionId session = 0;
    NodeId from;
    NodeId to;
    MsgBody body;
};

class Network;
class Node;

/// Node-side services available to a running flow machine.
class FlowContext {
public:
    FlowContext(Network& network, Node& node, FlowId flow);

    LedgerCore& ledger();
    const contracts::ContractConfig& config() const;
    const NodeId& node_id() const;
    NodeRole node_role() const;
    const NodeId& notary_node() const;
    std::int64_t now_ns() const;

    AccountRef lookup_account(AccountId id);  // throws UnknownAccount

    SessionId open_session(const NodeId& peer);
    void send(SessionId session, MsgBody body);

    void finish_ok(flows::FlowOk ok);
    void finish_failed(flows::FlowError error);
    void stamp_notarized();
    FlowId flow_id() const { return flow_; }
    bool finished() const { return finished_; }

private:
    Network& network_;
    Node& node_;
    FlowId flow_;
    bool finished_ = false;
};

/// Initiator-side protocol state machine. start() runs once; afterwards
/// the machine suspends until a session message arrives for it.
class FlowMachine {
public:
    virtual ~FlowMachine() = default;
    virtual void start(FlowContext& ctx) = 0;
    virtual void on_message(FlowContext& ctx, SessionId session, const MsgBody& body) = 0;
};

std::unique_ptr<FlowMachine> make_flow(const flows::FlowRequest& request);

// ---------------------------------------------------------------------------

class Node {
public:
    Node(Network& network, NodeConfig config);

    const NodeId& name() const { return config_.name; }
    NodeRole role() const { return config_.role; }
    bool installs(flows::FlowKind kind) const;

    void handle(const Envelope& env);

private:
    friend class Network;
    friend class FlowContext;

    void handle_flow_start(const FlowStart& msg);
    void handle_request(const Envelope& env);
    void deliver_to_flow(const Envelope& env);

    MsgBody answer_sign_request(const SignRequest& req);
    void apply_record_request(const RecordRequest& req);
    MsgBody answer_warrant_data(const WarrantDataRequest& req);

    Network& network_;
    NodeConfig config_;

    std::mutex flows_mu_;
    std::unordered_map<FlowId, std::unique_ptr<FlowMachine>> flows_;
};

/// The simulated network: five role nodes over an in-process transport,
/// one shared ledger substrate, client endpoints, and either a seeded
/// single-threaded scheduler (deterministic mode) or per-node worker
/// strands (concurrent mode).
class Network {
public:
    static std::unique_ptr<Network> start(NetworkConfig config);
    ~Network();

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    LedgerCore& ledger() { return *ledger_; }
    const NetworkConfig& config() const { return config_; }
    const NodeId& notary_node() const { return notary_; }
    const NodeId& hmrc_node() const { return ledger_->hmrc_node(); }
    SchedulerMode mode() const { return config_.mode; }

    // account/operator surface
    AccountRef create_account(const NodeId& node, const std::string& name, AccountKind kind);
    void deposit(const AccountRef& account, MoneyKind kind, Amount amount);
    Amount get_balance(const AccountRef& account, MoneyKind kind) const;
    std::vector<StatePtr> vault_query(const AccountRef& account, const VaultFilter& filter) const;

    // clients
    ClientId create_client(const NodeId& node);
    FlowHandle submit_flow(ClientId client, flows::FlowRequest request);

    std::optional<flows::FlowResult> poll(FlowHandle handle);
    flows::FlowResult wait(FlowHandle handle);

    /// Deterministic mode: process queued work to quiescence in
    /// seed-determined order.
    void run_until_idle();

    void inject_fault(const FaultSpec& fault);
    void resume_node(const NodeId& node);
    bool approves(const DataAccessRequestState& dar) const;

    // convenience flow operations: submit on the right node and complete
    flows::FlowResult issue_invoice(const AccountRef& seller, const AccountRef& buyer,
                                    std::vector<ItemLine> lines, MoneyKind kind);
    flows::FlowResult pay_invoice(const AccountRef& buyer, LinearId invoice_id);
    flows::FlowResult pay_invoice_with_tokens(const AccountRef& buyer, LinearId invoice_id);
    flows::FlowResult issue_tokens(const AccountRef& initiator, const AccountRef& recipient,
                                   Amount amount);
    flows::FlowResult request_warrant(const AccountRef& requester, const AccountRef& subject);
    flows::FlowResult execute_warrant(const AccountRef& requester, LinearId warrant_id);

    std::int64_t now_ns() const;

private:
    friend class Node;
    friend class FlowContext;

    explicit Network(NetworkConfig config);
    void boot();

    struct SessionInfo {
        SessionId id = 0;
        NodeId initiator;  // empty for client pseudo-sessions
        NodeId responder;
        NodeId owner_node;
        FlowId owner_flow = 0;
        bool broken = false;
        bool closure_notified = false;
    };

    struct FlowSlot {
        std::mutex mu;
        std::condition_variable cv;
        std::optional<flows::FlowResult> result;
        std::int64_t submitted_at_ns = 0;
        std::int64_t notarized_at_ns = 0;
        ClientId client = 0;
    };

    struct ClientInfo {
        NodeId node;
        std::atomic<std::size_t> outstanding{0};
    };

    // deterministic engine
    struct TimedEnvelope {
        Envelope env;
        double deliver_at_ms = 0;
        std::uint64_t seq = 0;
    };
    using QueueKey = std::pair<SessionId, NodeId>;

    // concurrent engine
    struct Strand {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<std::pair<Envelope, std::chrono::steady_clock::time_point>> q;
    };
    struct NodeRuntime {
        std::vector<std::unique_ptr<Strand>> strands;
        std::vector<std::jthread> workers;
    };

    SessionId open_session(const NodeId& initiator, const NodeId& responder, FlowId owner_flow,
                           const NodeId& owner_node);
    std::optional<std::pair<NodeId, FlowId>> session_owner(SessionId session) const;
    NodeId session_peer(SessionId session, const NodeId& self) const;
    void post(Envelope env);
    void dispatch(const Envelope& env);
    bool intercept_broken(const Envelope& env);
    void notify_session_closed(SessionId session);
    double pick_latency_ms();

    flows::FlowResult run_request(const NodeId& node, flows::FlowRequest request);
    void finish_flow(FlowId flow, flows::FlowResult result);
    void stamp_notarized(FlowId flow);
    std::shared_ptr<FlowSlot> slot_of(FlowId flow);

    bool node_paused(const NodeId& node) const;
    Node& node_at(const NodeId& name);

    NetworkConfig config_;
    std::unique_ptr<LedgerCore> ledger_;
    NodeId notary_;
    std::map<NodeId, std::unique_ptr<Node>> nodes_;
    std::chrono::steady_clock::time_point epoch_;

    mutable std::mutex meta_mu_;  // sessions, clients, slots, faults
    std::unordered_map<SessionId, SessionInfo> sessions_;
    std::unordered_map<ClientId, std::unique_ptr<ClientInfo>> clients_;
    std::map<NodeId, ClientId> op_clients_;
    std::unordered_map<FlowId, std::shared_ptr<FlowSlot>> slots_;
    std::set<std::pair<NodeId, NodeId>> broken_pairs_;
    std::set<NodeId> paused_;
    std::atomic<double> extra_delay_ms_{0};
    std::atomic<std::uint64_t> next_session_{1};
    std::atomic<std::uint64_t> next_flow_{1};
    std::atomic<std::uint64_t> next_client_{1};
    std::atomic<long> active_flows_{0};

    // deterministic engine state (single-threaded access)
    std::map<QueueKey, std::deque<TimedEnvelope>> det_queues_;
    double det_now_ms_ = 0;
    std::uint64_t det_seq_ = 0;
    std::mt19937_64 det_rng_;
    std::mt19937_64 jitter_rng_;
    std::mutex jitter_mu_;

    // concurrent engine state
    std::map<NodeId, NodeRuntime> runtimes_;
    std::atomic<bool> stopping_{false};
};

}  // namespace ledgersim::netsim
