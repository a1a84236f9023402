#include "ivote/actors.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"

namespace ivote::actors {

std::string_view variant_name(ProtocolVariant v) {
    return v == ProtocolVariant::original ? "original" : "proposed";
}

ProtocolVariant variant_from_name(std::string_view name) {
    if (name == "original") return ProtocolVariant::original;
    if (name == "proposed") return ProtocolVariant::proposed;
    throw ConfigError("unknown protocol variant: " + std::string(name));
}

// ---------------------------------------------------------------------------
// EventLog
// ---------------------------------------------------------------------------

void EventLog::append(std::string actor, std::string event, std::string detail) {
    events_.push_back(Event{next_ts_++, std::move(actor), std::move(event),
                            std::move(detail)});
}

void EventLog::append_from(const EventLog& other, const std::string& detail_prefix) {
    for (const auto& e : other.events_) {
        append(e.actor, e.event,
               detail_prefix.empty() ? e.detail : detail_prefix + e.detail);
    }
}

void EventLog::write_jsonl(std::ostream& out) const {
    for (const auto& e : events_) {
        nlohmann::ordered_json j;
        j["ts"] = e.ts;
        j["actor"] = e.actor;
        j["event"] = e.event;
        j["detail"] = e.detail;
        out << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

void Registry::enroll(const crypto::VoterKeyPair& keys) {
    keys_[keys.voter_id] = keys.pk;
}

bool Registry::eligible(const std::string& voter_id) const {
    return keys_.contains(voter_id);
}

const crypto::VerifyKey* Registry::key(const std::string& voter_id) const {
    auto it = keys_.find(voter_id);
    return it == keys_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// VoterApp
// ---------------------------------------------------------------------------

namespace {

void check_intent(const VoterIntent& intent, const msg::CandidateList& cl) {
    if (intent.beta < 1 || intent.beta > cl.m()) {
        throw ConfigError("intent index outside candidate list");
    }
    if (cl.at_index(intent.beta).id != intent.candidate_id) {
        throw ConfigError("intent candidate does not match candidate list");
    }
}

}  // namespace

CastOriginal voterapp_cast_original(const VoterIntent& intent,
                                    const msg::CandidateList& cl,
                                    const crypto::PublicKey& pk_s,
                                    const crypto::VoterKeyPair& keys,
                                    DeterministicRng& rng,
                                    crypto::MeteredCrypto& voterapp) {
    check_intent(intent, cl);
    CastOriginal cast;
    cast.r.bytes = rng.bytes32();
    cast.vote.ciphertext = voterapp.asym_encrypt(pk_s, intent.candidate_id, cast.r);
    cast.vote.signature = voterapp.sign(keys, view(cast.vote.ciphertext.bytes));
    cast.vote.voter_id = keys.voter_id;
    return cast;
}

CastProposed voterapp_cast_proposed(const VoterIntent& intent,
                                    const msg::CandidateList& cl,
                                    const crypto::PublicKey& pk_s,
                                    const crypto::VoterKeyPair& keys,
                                    DeterministicRng& rng,
                                    crypto::MeteredCrypto& voterapp) {
    check_intent(intent, cl);
    // Sampling a uniform preimage of the chosen symbols keeps the transmitted
    // tail uniform over all 2^32 values; symbol choice only fixes the display.
    std::uint32_t q_right = msg::sample_q_right_value(intent.chosen_q_right, rng);

    CastProposed cast;
    cast.r.bytes = rng.bytes32();
    cast.vote.ciphertext = voterapp.asym_encrypt(pk_s, intent.candidate_id, cast.r);
    cast.vote.signature = voterapp.sign(keys, view(cast.vote.ciphertext.bytes));
    cast.vote.voter_id = keys.voter_id;
    cast.q = msg::make_verification_parameter(q_right, rng);
    return cast;
}

msg::QrPayload make_qr_payload(const crypto::Randomness& r,
                               const msg::VoteRefToken& voteref) {
    msg::QrPayload p;
    p.r = r.bytes;
    p.voteref = voteref.token;
    return p;
}

// ---------------------------------------------------------------------------
// VFS
// ---------------------------------------------------------------------------

Vfs::Vfs(ProtocolVariant variant, msg::CandidateList cl, const Registry& registry,
         const Bytes32& token_seed, sim::OpCounters& counters, EventLog* log)
    : variant_(variant),
      cl_(std::move(cl)),
      registry_(&registry),
      token_rng_(token_seed),
      counters_(&counters),
      log_(log) {}

void Vfs::log(std::string_view actor, std::string_view event, std::string detail) {
    if (log_) log_->append(std::string(actor), std::string(event), std::move(detail));
}

StoreResult Vfs::store(const msg::SignEncVote& vote,
                       const std::optional<msg::VerificationParameter>& q) {
    if ((variant_ == ProtocolVariant::proposed) != q.has_value()) {
        throw ConfigError("verification parameter presence does not match variant");
    }
    ++store_attempts_;
    crypto::MeteredCrypto vfs(*counters_);

    if (!registry_->eligible(vote.voter_id)) {
        ++store_rejects_;
        log("vfs/forwarding", "store_rejected", vote.voter_id + " ineligible");
        return StoreResult{StoreStatus::ineligible_voter, {}};
    }
    const crypto::VerifyKey* pk = registry_->key(vote.voter_id);
    if (!vfs.verify(*pk, view(vote.ciphertext.bytes), vote.signature)) {
        ++store_rejects_;
        log("vfs/forwarding", "store_rejected", vote.voter_id + " bad signature");
        return StoreResult{StoreStatus::bad_signature, {}};
    }

    auto& records = ballots_[vote.voter_id];
    msg::BallotRecord rec;
    rec.vote = vote;
    rec.q = q;
    rec.seq = records.size() + 1;
    do {
        rec.voteref.token.token = token_rng_.bytes16();
    } while (token_index_.contains(rec.voteref.token));
    rec.voteref.issued_at = clock_++;
    rec.voteref.consumed = false;

    token_index_[rec.voteref.token] = {vote.voter_id, rec.seq};
    records.push_back(rec);
    log("vfs/storage", "ballot_stored",
        vote.voter_id + " seq=" + std::to_string(rec.seq));
    return StoreResult{StoreStatus::stored, rec.voteref.token};
}

const msg::BallotRecord* Vfs::find(const msg::VoteRefToken& t) const {
    auto it = token_index_.find(t);
    if (it == token_index_.end()) return nullptr;
    return &ballots_.at(it->second.first)[it->second.second - 1];
}

msg::BallotRecord* Vfs::find(const msg::VoteRefToken& t) {
    return const_cast<msg::BallotRecord*>(std::as_const(*this).find(t));
}

Vfs::Response<Vfs::RespOriginal> Vfs::verification_response_original(
    const msg::VoteRefToken& t) {
    msg::BallotRecord* rec = find(t);
    if (!rec) {
        log("vfs/forwarding", "verification_rejected", "unknown voteref");
        return {RespStatus::unknown_token, std::nullopt};
    }
    if (rec->voteref.consumed) {
        log("vfs/forwarding", "verification_rejected", "voteref replay");
        return {RespStatus::consumed_token, std::nullopt};
    }
    rec->voteref.consumed = true;
    log("vfs/forwarding", "verification_served",
        rec->vote.voter_id + " seq=" + std::to_string(rec->seq));
    return {RespStatus::ok, RespOriginal{rec->vote.ciphertext, cl_}};
}

Vfs::Response<Vfs::RespProposed> Vfs::verification_response_proposed(
    const msg::VoteRefToken& t) {
    msg::BallotRecord* rec = find(t);
    if (!rec) {
        log("vfs/forwarding", "verification_rejected", "unknown voteref");
        return {RespStatus::unknown_token, std::nullopt};
    }
    if (rec->voteref.consumed) {
        log("vfs/forwarding", "verification_rejected", "voteref replay");
        return {RespStatus::consumed_token, std::nullopt};
    }
    rec->voteref.consumed = true;

    crypto::MeteredCrypto vfs(*counters_);
    crypto::HashDigest key = vfs.hash(view(rec->vote.ciphertext.bytes));
    crypto::SymCiphertext e_sym = vfs.sym_encrypt(key, view(rec->q->q));
    log("vfs/forwarding", "verification_served",
        rec->vote.voter_id + " seq=" + std::to_string(rec->seq));
    return {RespStatus::ok, RespProposed{cl_, e_sym}};
}

void Vfs::write_store(std::ostream& out) const {
    std::vector<msg::BallotRecord> all;
    for (const auto& [voter, records] : ballots_) {
        all.insert(all.end(), records.begin(), records.end());
    }
    msg::write_ballot_store(out, all);
}

// ---------------------------------------------------------------------------
// VerifApp
// ---------------------------------------------------------------------------

OriginalDisplay verifapp_verify_original(const msg::QrPayload& payload,
                                         const Vfs::RespOriginal& resp,
                                         const crypto::PublicKey& pk_s,
                                         crypto::MeteredCrypto& verifapp) {
    OriginalDisplay out;
    crypto::Randomness r{payload.r};
    out.reencryptions.reserve(resp.cl.m());
    for (std::size_t j = 1; j <= resp.cl.m(); ++j) {
        const msg::Candidate& cand = resp.cl.at_index(j);
        out.reencryptions.push_back(verifapp.asym_encrypt(pk_s, cand.id, r));
        if (!out.matched_index && out.reencryptions.back() == resp.e_asym) {
            out.matched_index = j;
            out.displayed = cand;
        }
    }
    return out;
}

ProposedDisplay verifapp_verify_proposed(const msg::QrPayload& payload,
                                         const Vfs::RespProposed& resp,
                                         const crypto::PublicKey& pk_s,
                                         crypto::MeteredCrypto& verifapp) {
    ProposedDisplay out;
    crypto::Randomness r{payload.r};
    out.reencryptions.reserve(resp.cl.m());
    out.display.entries.reserve(resp.cl.m());
    for (std::size_t j = 1; j <= resp.cl.m(); ++j) {
        out.reencryptions.push_back(
            verifapp.asym_encrypt(pk_s, resp.cl.at_index(j).id, r));
        crypto::HashDigest key = verifapp.hash(view(out.reencryptions.back().bytes));
        Bytes32 q_j = verifapp.sym_decrypt(key, resp.e_sym);
        out.display.entries.push_back(
            msg::DisplayEntry{q_j, msg::truncate_display(q_j)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Voter check
// ---------------------------------------------------------------------------

VerificationOutcome voter_check_original(const OriginalDisplay& display,
                                         const VoterIntent& intent) {
    VerificationOutcome out;
    out.variant = ProtocolVariant::original;
    out.matched_index = display.matched_index;
    out.displayed = display.displayed;
    out.accepted =
        display.displayed.has_value() && display.displayed->id == intent.candidate_id;
    out.alarm = !out.accepted;
    return out;
}

bool tail_bits_match(const Bytes32& value, std::uint32_t q_right,
                     int truncation_bits) {
    if (truncation_bits != 8 && truncation_bits != 16 && truncation_bits != 24 &&
        truncation_bits != 32) {
        throw ConfigError("truncation_bits must be 8, 16, 24 or 32");
    }
    int n = truncation_bits / 8;
    for (int i = 0; i < n; ++i) {
        auto expect = static_cast<std::uint8_t>((q_right >> (8 * i)) & 0xFF);
        if (value[31 - i] != expect) return false;
    }
    return true;
}

VerificationOutcome voter_check_proposed(const msg::DisplayList& display,
                                         std::uint32_t q_right, std::size_t beta,
                                         int truncation_bits) {
    VerificationOutcome out;
    out.variant = ProtocolVariant::proposed;

    std::vector<std::size_t> matches;
    for (std::size_t j = 0; j < display.entries.size(); ++j) {
        if (tail_bits_match(display.entries[j].q, q_right, truncation_bits)) {
            matches.push_back(j + 1);
        }
    }
    // No match and multiple matches both alarm: a duplicate display entry
    // could mask a substituted vote, so alpha must be unique.
    if (matches.size() == 1) {
        out.matched_index = matches.front();
        out.accepted = matches.front() == beta;
    }
    out.alarm = !out.accepted;
    return out;
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

TallyResult counting_tally(
    const std::map<std::string, std::vector<msg::BallotRecord>>& store,
    const crypto::SecretKey& sk_s, const Registry& registry,
    const Bytes32& mix_seed, crypto::MeteredCrypto& counting) {
    struct Retained {
        const msg::BallotRecord* rec;
        const std::string* voter;
    };
    std::vector<Retained> retained;
    TallyResult result;

    for (const auto& [voter, records] : store) {
        if (records.empty() || !registry.eligible(voter)) continue;
        const msg::BallotRecord* latest = &records.front();
        for (const auto& rec : records) {
            if (rec.seq > latest->seq) latest = &rec;
        }
        result.ballots_superseded += records.size() - 1;
        retained.push_back(Retained{latest, &voter});
    }

    // Seeded Fisher-Yates shuffle stands in for the mixnet; counting is a
    // multiset so the permutation cannot change the result.
    DeterministicRng mix(mix_seed);
    for (std::size_t i = retained.size(); i > 1; --i) {
        std::swap(retained[i - 1], retained[mix.below(i)]);
    }

    for (const auto& item : retained) {
        std::uint32_t candidate_id;
        try {
            candidate_id = counting.asym_decrypt(sk_s, item.rec->vote.ciphertext);
        } catch (const DecodeError& e) {
            throw AuditError(*item.voter, item.rec->seq, e.what());
        }
        ++result.counts[candidate_id];
        ++result.ballots_counted;
    }
    return result;
}

}  // namespace ivote::actors
