// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ledgersim::netsim {

const char* to_string(NodeRole role) {
    switch (role) {
        case NodeRole::HmrcCwp: return "HMRCCWP";
        case NodeRole::BuyerCwp: return "BuyerCWP";
        case NodeRole::SellerCwp: return "SellerCWP";
        case NodeRole::LegalCwp: return "LegalCWP";
        case NodeRole::Notary: return "Notary";
    }
    return "?";
}

NodeRole node_role_from_string(const std::string& name) {
    if (name == "HMRCCWP") return NodeRole::HmrcCwp;
    if (name == "BuyerCWP") return NodeRole::BuyerCwp;
    if (name == "SellerCWP") return NodeRole::SellerCwp;
    if (name == "LegalCWP") return NodeRole::LegalCwp;
    if (name == "Notary") return NodeRole::Notary;
    throw LedgerError(Errc::ParseError, "unknown node role: " + name);
}

FaultSpec FaultSpec::drop_session(NodeId a, NodeId b) {
    FaultSpec f;
    f.kind = Kind::DropSession;
    f.a = std::move(a);
    f.b = std::move(b);
    return f;
}

FaultSpec FaultSpec::delay(double ms) {
    FaultSpec f;
    f.kind = Kind::Delay;
    f.delay_ms = ms;
    return f;
}

FaultSpec FaultSpec::node_pause(NodeId node) {
    FaultSpec f;
    f.kind = Kind::NodePause;
    f.a = std::move(node);
    return f;
}

NetworkConfig NetworkConfig::standard(SchedulerMode mode, std::uint64_t seed) {
    NetworkConfig cfg;
    cfg.mode = mode;
    cfg.seed = seed;
    for (auto role : {NodeRole::HmrcCwp, NodeRole::BuyerCwp, NodeRole::SellerCwp,
                      NodeRole::LegalCwp, NodeRole::Notary})
        cfg.nodes.push_back({to_string(role), role, 0});
    return cfg;
}

NetworkConfig NetworkConfig::from_json(const nlohmann::json& doc) {
    NetworkConfig cfg = NetworkConfig::standard();
    if (doc.contains("nodes")) {
        cfg.nodes.clear();
        for (const auto& n : doc.at("nodes")) {
            NodeConfig node;
            node.name = n.at("name").get<std::string>();
            node.role = node_role_from_string(
                n.contains("role") ? n.at("role").get<std::string>() : node.name);
            if (n.contains("workers")) node.workers = n.at("workers").get<int>();
            cfg.nodes.push_back(std::move(node));
        }
    }
    if (doc.contains("mode")) {
        const auto mode = doc.at("mode").get<std::string>();
        if (mode == "deterministic")
            cfg.mode = SchedulerMode::Deterministic;
        else if (mode == "concurrent")
            cfg.mode = SchedulerMode::Concurrent;
        else
            throw LedgerError(Errc::ParseError, "unknown scheduler mode: " + mode);
    }
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("latency_ms")) cfg.latency_ms = doc.at("latency_ms").get<double>();
    if (doc.contains("jitter_ms")) cfg.jitter_ms = doc.at("jitter_ms").get<double>();
    if (doc.contains("default_workers"))
        cfg.default_workers = doc.at("default_workers").get<int>();
    cfg.contracts = contracts::ContractConfig::from_json(doc);
    if (doc.contains("faults")) {
        for (const auto& f : doc.at("faults")) {
            const auto kind = f.at("kind").get<std::string>();
            if (kind == "drop_session")
                cfg.fault_schedule.push_back(FaultSpec::drop_session(
                    f.at("a").get<std::string>(), f.at("b").get<std::string>()));
            else if (kind == "delay")
                cfg.fault_schedule.push_back(FaultSpec::delay(f.at("ms").get<double>()));
            else if (kind == "node_pause")
                cfg.fault_schedule.push_back(
                    FaultSpec::node_pause(f.at("node").get<std::string>()));
            else
                throw LedgerError(Errc::ParseError, "unknown fault kind: " + kind);
        }
    }
    return cfg;
}

NetworkConfig NetworkConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LedgerError(Errc::IoError, "cannot open network config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw LedgerError(Errc::ParseError,
                          "network config parse error: " + std::string(e.what()));
    }
    return from_json(doc);
}

// ---------------------------------------------------------------------------
// FlowContext

FlowContext::FlowContext(Network& network, Node& node, FlowId flow)
    : network_(network), node_(node), flow_(flow) {}

LedgerCore& FlowContext::ledger() { return network_.ledger(); }
const contracts::ContractConfig& FlowContext::config() const {
    return network_.ledger().config();
}
const NodeId& FlowContext::node_id() const { return node_.name(); }
NodeRole FlowContext::node_role() const { return node_.role(); }
const NodeId& FlowContext::notary_node() const { return network_.notary_node(); }
std::int64_t FlowContext::now_ns() const { return network_.now_ns(); }

AccountRef FlowContext::lookup_account(AccountId id) {
    return network_.ledger().lookup_account(id);
}

SessionId FlowContext::open_session(const NodeId& peer) {
    return network_.open_session(node_.name(), peer, flow_, node_.name());
}

void FlowContext::send(SessionId session, MsgBody body) {
    Envelope env;
    env.session = session;
    env.from = node_.name();
    env.to = network_.session_peer(session, node_.name());
    env.body = std::move(body);
    network_.post(std::move(env));
}

void FlowContext::finish_ok(flows::FlowOk ok) {
    finished_ = true;
    flows::FlowResult result;
    result.outcome = std::move(ok);
    network_.finish_flow(flow_, std::move(result));
}

void FlowContext::finish_failed(flows::FlowError error) {
    finished_ = true;
    flows::FlowResult result;
    result.outcome = std::move(error);
    network_.finish_flow(flow_, std::move(result));
}

void FlowContext::stamp_notarized() { network_.stamp_notarized(flow_); }

// ---------------------------------------------------------------------------
// Node

Node::Node(Network& network, NodeConfig config) : network_(network), config_(std::move(config)) {}

bool Node::installs(flows::FlowKind kind) const {
    // warrant flows are deployed on the HMRC node only; the notary runs
    // no initiator flows at all; wallet flows run on every CWP
    if (config_.role == NodeRole::Notary) return false;
    if (kind == flows::FlowKind::RequestWarrant || kind == flows::FlowKind::ExecuteWarrant)
        return config_.role == NodeRole::HmrcCwp;
    return true;
}

void Node::handle(const Envelope& env) {
    if (std::holds_alternative<FlowStart>(env.body)) {
        handle_flow_start(std::get<FlowStart>(env.body));
        return;
    }
    if (std::holds_alternative<SignRequest>(env.body) ||
        std::holds_alternative<NotarizeRequest>(env.body) ||
        std::holds_alternative<RecordRequest>(env.body) ||
        std::holds_alternative<WarrantDataRequest>(env.body)) {
        handle_request(env);
        return;
    }
    deliver_to_flow(env);
}

void Node::handle_flow_start(const FlowStart& msg) {
    auto machine = make_flow(msg.request);
    std::lock_guard lock(flows_mu_);
    auto [it, inserted] = flows_.emplace(msg.flow, std::move(machine));
    FlowContext ctx(network_, *this, msg.flow);
    it->second->start(ctx);
    if (ctx.finished()) flows_.erase(msg.flow);
}

void Node::handle_request(const Envelope& env) {
    MsgBody reply;
    if (const auto* sign = std::get_if<SignRequest>(&env.body)) {
        reply = answer_sign_request(*sign);
    } else if (const auto* notarize = std::get_if<NotarizeRequest>(&env.body)) {
        if (config_.role != NodeRole::Notary) {
            reply = NotarizeFailed{Errc::NotaryError, "node is not a notary"};
        } else {
            try {
                SignedTransaction tx = notarize->tx;
                auto result = network_.ledger().notarize(tx);
                reply = NotarizeOk{result, *tx.notary_signature};
            } catch (const LedgerError& e) {
                reply = NotarizeFailed{e.code(), e.what()};
            }
        }
    } else if (const auto* record = std::get_if<RecordRequest>(&env.body)) {
        apply_record_request(*record);
        reply = RecordAck{};
    } else if (const auto* data = std::get_if<WarrantDataRequest>(&env.body)) {
        reply = answer_warrant_data(*data);
    }
    Envelope out;
    out.session = env.session;
    out.from = config_.name;
    out.to = env.from;
    out.body = std::move(reply);
    network_.post(std::move(out));
}

MsgBody Node::answer_sign_request(const SignRequest& req) {
    auto& ledger = network_.ledger();
    const auto& core = *req.tx;

    std::vector<StatePtr> resolved;
    resolved.reserve(core.inputs.size());
    for (const auto& ref : core.inputs) {
        auto state = ledger.resolve(ref);
        if (!state)
            return SignRefused{{ViolationReason::WrongStructure, "unresolvable input state"}};
        resolved.push_back(std::move(state));
    }

    AccountRef signer;
    try {
        signer = ledger.lookup_account(req.signer);
    } catch (const LedgerError&) {
        return SignRefused{{ViolationReason::WrongSigners, "unknown signer account"}};
    }
    if (signer.host_node != config_.name)
        return SignRefused{{ViolationReason::WrongSigners, "signer is not hosted on this node"}};
    const bool required = std::ranges::any_of(
        core.required_signers, [&](const AccountRef& s) { return s.id == signer.id; });
    if (!required)
        return SignRefused{{ViolationReason::WrongSigners, "account is not a required signer"}};

    if (auto violation =
            contracts::verify_transaction(core, resolved, ledger.hmrc_node(), ledger.config()))
        return SignRefused{*violation};

    // the legal authority applies its approval policy before signing
    if (signer.kind == AccountKind::LegalAuthority &&
        (core.command == Command::RequestDar || core.command == Command::ExecuteDar)) {
        const auto& dar = std::get<DataAccessRequestState>(*core.outputs[0]);
        if (!network_.approves(dar))
            return SignRefused{{ViolationReason::WrongAuthority, "authorization declined"}};
    }

    return SignResponse{signer.id, default_signer().sign(signer.id, core.tx_id)};
}

void Node::apply_record_request(const RecordRequest& req) {
    auto& ledger = network_.ledger();
    for (const auto& out : req.tx->outputs) {
        for (const auto& part : participants_of(*out)) {
            if (part.host_node != config_.name) continue;
            ledger.record_state(part, out, req.tx->tx_id);
        }
    }
}

MsgBody Node::answer_warrant_data(const WarrantDataRequest& req) {
    auto& ledger = network_.ledger();
    auto committed = ledger.resolve(req.warrant_ref);
    if (!committed || !states_equal(*committed, *req.warrant))
        return SessionClosed{"presented warrant is not on the ledger"};
    const auto* dar = std::get_if<DataAccessRequestState>(req.warrant.get());
    if (!dar || dar->status != DarStatus::Executed)
        return SessionClosed{"warrant is not executed"};
    if (dar->subject.host_node != config_.name)
        return SessionClosed{"subject is not hosted on this node"};

    VaultFilter invoices;
    invoices.kind = StateKind::Invoice;
    return WarrantDataResponse{ledger.vault_query(dar->subject.id, invoices)};
}

void Node::deliver_to_flow(const Envelope& env) {
    auto owner = network_.session_owner(env.session);
    if (!owner || owner->first != config_.name) return;
    std::lock_guard lock(flows_mu_);
    auto it = flows_.find(owner->second);
    if (it == flows_.end()) return;  // flow already finished; stale message
    FlowContext ctx(network_, *this, owner->second);
    it->second->on_message(ctx, env.session, env.body);
    if (ctx.finished()) flows_.erase(owner->second);
}

// ---------------------------------------------------------------------------
// Network

Network::Network(NetworkConfig config) : config_(std::move(config)) {}

std::unique_ptr<Network> Network::start(NetworkConfig config) {
    std::set<NodeId> names;
    int notaries = 0;
    std::set<NodeRole> roles;
    NodeId notary_name, hmrc_name;
    for (const auto& node : config.nodes) {
        if (!names.insert(node.name).second)
            throw LedgerError(Errc::DuplicateNode, "duplicate node: " + node.name);
        if (node.role == NodeRole::Notary && roles.contains(NodeRole::Notary))
            throw LedgerError(Errc::DuplicateNode, "exactly one notary per network");
        roles.insert(node.role);
        if (node.role == NodeRole::Notary) {
            ++notaries;
            notary_name = node.name;
        }
        if (node.role == NodeRole::HmrcCwp) hmrc_name = node.name;
    }
    if (notaries == 0) throw LedgerError(Errc::MissingNotary, "network needs a notary node");
    for (auto role :
         {NodeRole::HmrcCwp, NodeRole::BuyerCwp, NodeRole::SellerCwp, NodeRole::LegalCwp})
        if (!roles.contains(role))
            throw LedgerError(Errc::MissingNode,
                              std::string("network role missing: ") + to_string(role));

    auto network = std::unique_ptr<Network>(new Network(std::move(config)));
    network->notary_ = notary_name;
    std::vector<NodeId> node_names(names.begin(), names.end());
    network->ledger_ = std::make_unique<LedgerCore>(std::move(node_names), hmrc_name,
                                                    network->config_.contracts);
    network->boot();
    return network;
}

void Network::boot() {
    epoch_ = std::chrono::steady_clock::now();
    det_rng_.seed(config_.seed);
    jitter_rng_.seed(config_.seed ^ 0x9e3779b97f4a7c15ULL);

    for (const auto& nc : config_.nodes) {
        NodeConfig resolved = nc;
        if (resolved.workers <= 0) resolved.workers = std::max(1, config_.default_workers);
        nodes_[nc.name] = std::make_unique<Node>(*this, resolved);
    }

    if (config_.mode == SchedulerMode::Concurrent) {
        for (const auto& [name, node] : nodes_) {
            auto& rt = runtimes_[name];
            const int workers = node->config_.workers;
            for (int i = 0; i < workers; ++i) rt.strands.push_back(std::make_unique<Strand>());
            for (int i = 0; i < workers; ++i) {
                Strand* strand = rt.strands[i].get();
                const NodeId node_name = name;
                rt.workers.emplace_back([this, strand, node_name] {
                    for (;;) {
                        Envelope env;
                        {
                            std::unique_lock lock(strand->mu);
                            strand->cv.wait(lock, [&] {
                                return stopping_.load() ||
                                       (!strand->q.empty() && !node_paused(node_name));
                            });
                            if (stopping_.load()) return;
                            auto at = strand->q.front().second;
                            if (at > std::chrono::steady_clock::now()) {
                                strand->cv.wait_until(lock, at);
                                continue;
                            }
                            env = std::move(strand->q.front().first);
                            strand->q.pop_front();
                        }
                        dispatch(env);
                    }
                });
            }
        }
    }

    for (const auto& fault : config_.fault_schedule) inject_fault(fault);
}

Network::~Network() {
    stopping_.store(true);
    for (auto& [name, rt] : runtimes_)
        for (auto& strand : rt.strands) {
            std::lock_guard lock(strand->mu);
            strand->cv.notify_all();
        }
    for (auto& [name, rt] : runtimes_) rt.workers.clear();  // joins
}

Node& Network::node_at(const NodeId& name) {
    auto it = nodes_.find(name);
    if (it == nodes_.end()) throw LedgerError(Errc::UnknownNode, "unknown node: " + name);
    return *it->second;
}

bool Network::node_paused(const NodeId& node) const {
    std::lock_guard lock(meta_mu_);
    return paused_.contains(node);
}

std::int64_t Network::now_ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - epoch_)
        .count();
}

AccountRef Network::create_account(const NodeId& node, const std::string& name, AccountKind kind) {
    if (!nodes_.contains(node)) throw LedgerError(Errc::UnknownNode, "unknown node: " + node);
    return ledger_->create_account(node, name, kind);
}

void Network::deposit(const AccountRef& account, MoneyKind kind, Amount amount) {
    ledger_->deposit(account, kind, amount);
}

Amount Network::get_balance(const AccountRef& account, MoneyKind kind) const {
    return ledger_->get_balance(account, kind);
}

std::vector<StatePtr> Network::vault_query(const AccountRef& account,
                                           const VaultFilter& filter) const {
    return ledger_->vault_query(account, filter);
}

bool Network::approves(const DataAccessRequestState& dar) const {
    if (!config_.approval_policy) return true;
    return config_.approval_policy(dar);
}

ClientId Network::create_client(const NodeId& node) {
    if (!nodes_.contains(node)) throw LedgerError(Errc::UnknownNode, "unknown node: " + node);
    const ClientId id = next_client_.fetch_add(1);
    auto info = std::make_unique<ClientInfo>();
    info->node = node;
    std::lock_guard lock(meta_mu_);
    clients_[id] = std::move(info);
    return id;
}

FlowHandle Network::submit_flow(ClientId client, flows::FlowRequest request) {
    ClientInfo* info = nullptr;
    {
        std::lock_guard lock(meta_mu_);
        auto it = clients_.find(client);
        if (it == clients_.end()) throw LedgerError(Errc::UnknownNode, "unknown client endpoint");
        info = it->second.get();
    }

    const AccountRef initiator = ledger_->lookup_account(request.initiator);
    if (initiator.host_node != info->node)
        throw LedgerError(Errc::WrongNode,
                          initiator.display_name + " is not hosted on " + info->node);
    Node& node = node_at(info->node);
    if (!node.installs(request.kind))
        throw LedgerError(Errc::WrongNode, std::string("node ") + info->node + " does not run " +
                                               to_string(request.kind) + " flows");
    if (info->outstanding.load() >= config_.client_queue_limit)
        throw LedgerError(Errc::QueueOverflow, "client queue limit exceeded");

    const FlowId id = next_flow_.fetch_add(1);
    auto slot = std::make_shared<FlowSlot>();
    slot->submitted_at_ns = now_ns();
    slot->client = client;
    {
        std::lock_guard lock(meta_mu_);
        slots_[id] = slot;
    }
    info->outstanding.fetch_add(1);
    active_flows_.fetch_add(1);

    const SessionId session = open_session("", info->node, id, info->node);
    Envelope env;
    env.session = session;
    env.from = "client";
    env.to = info->node;
    env.body = FlowStart{id, std::move(request)};
    post(std::move(env));
    return FlowHandle{id};
}

std::shared_ptr<Network::FlowSlot> Network::slot_of(FlowId flow) {
    std::lock_guard lock(meta_mu_);
    auto it = slots_.find(flow);
    return it == slots_.end() ? nullptr : it->second;
}

void Network::finish_flow(FlowId flow, flows::FlowResult result) {
    auto slot = slot_of(flow);
    if (!slot) return;
    ClientId client = 0;
    {
        std::lock_guard lock(slot->mu);
        if (slot->result) return;
        result.submitted_at_ns = slot->submitted_at_ns;
        result.notarized_at_ns = slot->notarized_at_ns;
        if (result.ok()) result.distributed_at_ns = now_ns();
        slot->result = std::move(result);
        client = slot->client;
    }
    slot->cv.notify_all();
    active_flows_.fetch_sub(1);
    std::lock_guard lock(meta_mu_);
    auto it = clients_.find(client);
    if (it != clients_.end()) it->second->outstanding.fetch_sub(1);
}

void Network::stamp_notarized(FlowId flow) {
    auto slot = slot_of(flow);
    if (!slot) return;
    std::lock_guard lock(slot->mu);
    slot->notarized_at_ns = now_ns();
}

std::optional<flows::FlowResult> Network::poll(FlowHandle handle) {
    auto slot = slot_of(handle.id);
    if (!slot) return std::nullopt;
    std::lock_guard lock(slot->mu);
    return slot->result;
}

flows::FlowResult Network::wait(FlowHandle handle) {
    auto slot = slot_of(handle.id);
    if (!slot) throw LedgerError(Errc::IncompleteRun, "unknown flow handle");
    if (config_.mode == SchedulerMode::Deterministic) {
        {
            std::lock_guard lock(slot->mu);
            if (slot->result) return *slot->result;
        }
        run_until_idle();
        std::lock_guard lock(slot->mu);
        if (!slot->result)
            throw LedgerError(Errc::IncompleteRun, "flow did not resolve at quiescence");
        return *slot->result;
    }
    std::unique_lock lock(slot->mu);
    slot->cv.wait(lock, [&] { return slot->result.has_value(); });
    return *slot->result;
}

SessionId Network::open_session(const NodeId& initiator, const NodeId& responder,
                                FlowId owner_flow, const NodeId& owner_node) {
    const SessionId id = next_session_.fetch_add(1);
    SessionInfo info;
    info.id = id;
    info.initiator = initiator;
    info.responder = responder;
    info.owner_node = owner_node;
    info.owner_flow = owner_flow;
    std::lock_guard lock(meta_mu_);
    if (!initiator.empty()) {
        auto key = std::minmax(initiator, responder);
        if (broken_pairs_.contains({key.first, key.second})) info.broken = true;
    }
    sessions_[id] = std::move(info);
    return id;
}

std::optional<std::pair<NodeId, FlowId>> Network::session_owner(SessionId session) const {
    std::lock_guard lock(meta_mu_);
    auto it = sessions_.find(session);
    if (it == sessions_.end()) return std::nullopt;
    return std::make_pair(it->second.owner_node, it->second.owner_flow);
}

NodeId Network::session_peer(SessionId session, const NodeId& self) const {
    std::lock_guard lock(meta_mu_);
    auto it = sessions_.find(session);
    if (it == sessions_.end()) throw LedgerError(Errc::SessionFailure, "unknown session");
    const auto& s = it->second;
    return s.responder == self ? s.initiator : s.responder;
}

double Network::pick_latency_ms() {
    double latency = config_.latency_ms + extra_delay_ms_.load();
    if (config_.jitter_ms > 0) {
        std::lock_guard lock(jitter_mu_);
        std::uniform_real_distribution<double> dist(0.0, config_.jitter_ms);
        latency += dist(jitter_rng_);
    }
    return latency;
}

void Network::post(Envelope env) {
    // broken sessions reject traffic and notify the owning flow once
    if (!std::holds_alternative<SessionClosed>(env.body)) {
        bool notify = false;
        bool broken = false;
        {
            std::lock_guard lock(meta_mu_);
            auto it = sessions_.find(env.session);
            if (it != sessions_.end() && it->second.broken) {
                broken = true;
                if (!it->second.closure_notified) {
                    it->second.closure_notified = true;
                    notify = true;
                }
            }
        }
        if (broken) {
            if (notify) notify_session_closed(env.session);
            return;
        }
    }

    const double delay_ms = pick_latency_ms();
    if (config_.mode == SchedulerMode::Deterministic) {
        TimedEnvelope timed;
        timed.deliver_at_ms = det_now_ms_ + delay_ms;
        timed.seq = det_seq_++;
        QueueKey key{env.session, env.to};
        timed.env = std::move(env);
        det_queues_[key].push_back(std::move(timed));
        return;
    }

    auto& rt = runtimes_.at(env.to);
    Strand& strand = *rt.strands[env.session % rt.strands.size()];
    const auto at = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double, std::milli>(delay_ms));
    {
        std::lock_guard lock(strand.mu);
        strand.q.emplace_back(std::move(env), at);
    }
    strand.cv.notify_one();
}

void Network::notify_session_closed(SessionId session) {
    auto owner = session_owner(session);
    if (!owner) return;
    Envelope env;
    env.session = session;
    env.from = "network";
    env.to = owner->first;
    env.body = SessionClosed{"session dropped"};
    post(std::move(env));
}

bool Network::intercept_broken(const Envelope& env) {
    if (std::holds_alternative<SessionClosed>(env.body)) return false;
    bool notify = false;
    {
        std::lock_guard lock(meta_mu_);
        auto it = sessions_.find(env.session);
        if (it == sessions_.end() || !it->second.broken) return false;
        if (!it->second.closure_notified) {
            it->second.closure_notified = true;
            notify = true;
        }
    }
    if (notify) notify_session_closed(env.session);
    return true;
}

void Network::dispatch(const Envelope& env) {
    if (intercept_broken(env)) return;
    node_at(env.to).handle(env);
}

void Network::run_until_idle() {
    if (config_.mode != SchedulerMode::Deterministic)
        throw LedgerError(Errc::ConfigViolation, "run_until_idle needs deterministic mode");

    for (;;) {
        std::vector<QueueKey> ready;
        double min_at = 0;
        bool have = false;
        for (auto& [key, queue] : det_queues_) {
            if (queue.empty()) continue;
            if (node_paused(key.second)) continue;
            const double at = queue.front().deliver_at_ms;
            if (!have || at < min_at - 1e-12) {
                min_at = at;
                ready.clear();
                ready.push_back(key);
                have = true;
            } else if (std::abs(at - min_at) <= 1e-12) {
                ready.push_back(key);
            }
        }
        if (!have) break;

        const QueueKey key = ready[det_rng_() % ready.size()];
        auto it = det_queues_.find(key);
        TimedEnvelope timed = std::move(it->second.front());
        it->second.pop_front();
        if (it->second.empty()) det_queues_.erase(it);
        det_now_ms_ = std::max(det_now_ms_, timed.deliver_at_ms);
        dispatch(timed.env);
    }

    if (active_flows_.load() > 0) {
        bool stalled_on_pause = false;
        for (auto& [key, queue] : det_queues_)
            if (!queue.empty() && node_paused(key.second)) stalled_on_pause = true;
        if (!stalled_on_pause)
            throw LedgerError(Errc::DeadlockDetected,
                              "flows pending but no deliverable messages remain");
    }
}

void Network::inject_fault(const FaultSpec& fault) {
    switch (fault.kind) {
        case FaultSpec::Kind::DropSession: {
            auto key = std::minmax(fault.a, fault.b);
            std::lock_guard lock(meta_mu_);
            broken_pairs_.insert({key.first, key.second});
            for (auto& [id, session] : sessions_) {
                if (session.initiator.empty()) continue;
                auto have = std::minmax(session.initiator, session.responder);
                if (have.first == key.first && have.second == key.second) session.broken = true;
            }
            break;
        }
        case FaultSpec::Kind::Delay:
            extra_delay_ms_.store(fault.delay_ms);
            break;
        case FaultSpec::Kind::NodePause: {
            std::lock_guard lock(meta_mu_);
            paused_.insert(fault.a);
            break;
        }
    }
}

void Network::resume_node(const NodeId& node) {
    {
        std::lock_guard lock(meta_mu_);
        paused_.erase(node);
    }
    auto it = runtimes_.find(node);
    if (it != runtimes_.end())
        for (auto& strand : it->second.strands) strand->cv.notify_all();
}

// ---------------------------------------------------------------------------
// convenience flow operations

flows::FlowResult Network::run_request(const NodeId& node, flows::FlowRequest request) {
    ClientId client = 0;
    {
        std::lock_guard lock(meta_mu_);
        auto it = op_clients_.find(node);
        if (it != op_clients_.end()) client = it->second;
    }
    if (client == 0) {
        client = create_client(node);
        std::lock_guard lock(meta_mu_);
        op_clients_[node] = client;
    }
    auto handle = submit_flow(client, std::move(request));
    return wait(handle);
}

flows::FlowResult Network::issue_invoice(const AccountRef& seller, const AccountRef& buyer,
                                         std::vector<ItemLine> lines, MoneyKind kind) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::IssueInvoice;
    request.initiator = seller.id;
    request.payload = flows::IssueInvoicePayload{buyer.id, make_lines(std::move(lines)), kind};
    return run_request(seller.host_node, std::move(request));
}

flows::FlowResult Network::pay_invoice(const AccountRef& buyer, LinearId invoice_id) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::PayInvoice;
    request.initiator = buyer.id;
    request.payload = flows::PayInvoicePayload{invoice_id};
    return run_request(buyer.host_node, std::move(request));
}

flows::FlowResult Network::pay_invoice_with_tokens(const AccountRef& buyer, LinearId invoice_id) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::PayInvoiceTokens;
    request.initiator = buyer.id;
    request.payload = flows::PayInvoicePayload{invoice_id};
    return run_request(buyer.host_node, std::move(request));
}

flows::FlowResult Network::issue_tokens(const AccountRef& initiator, const AccountRef& recipient,
                                        Amount amount) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::IssueTokens;
    request.initiator = initiator.id;
    request.payload = flows::IssueTokensPayload{recipient.id, amount};
    return run_request(initiator.host_node, std::move(request));
}

flows::FlowResult Network::request_warrant(const AccountRef& requester,
                                           const AccountRef& subject) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::RequestWarrant;
    request.initiator = requester.id;
    request.payload = flows::RequestWarrantPayload{subject.id};
    return run_request(requester.host_node, std::move(request));
}

flows::FlowResult Network::execute_warrant(const AccountRef& requester, LinearId warrant_id) {
    flows::FlowRequest request;
    request.kind = flows::FlowKind::ExecuteWarrant;
    request.initiator = requester.id;
    request.payload = flows::ExecuteWarrantPayload{warrant_id};
    return run_request(requester.host_node, std::move(request));
}

}  // namespace ledgersim::netsim
