"""The bridge contract state machine: deposits into the local accumulator,
delayed withdrawals against the OR-of-two-roots relation, immediate nullifier
exposure, and duplicate-driven cancellation.

One instance per chain.  The timing discipline is the heart of the protocol:
a withdrawal's nullifier becomes public at *submission*, the payout waits
relay_delay + epsilon ticks, and a relayed duplicate of a locally exposed
nullifier cancels the pending payout and burns the nullifier for good.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import lightclient, zkrel
from .field_hash import DEFAULT_PARAMS, FieldElement, HashParams, fe_hex, hash2
from .lightclient import BlockHeader, StateAttestation, StateResult, header_digest
from .merkle import MerkleTree, mt_add, mt_setup
from .zkrel import Proof, ProofParams, Statement

PENDING = "pending"
FINALIZED = "finalized"
CANCELLED = "cancelled"

LOCAL = "local"
REMOTE = "remote"


class ContractError(Exception):
    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason


@dataclass(frozen=True)
class EventRecord:
    """One line of the public transcript."""

    tick: int
    chain: str
    kind: str
    fields: tuple  # ordered (key, value) string pairs

    def to_line(self) -> str:
        parts = [f"t={self.tick}", f"chain={self.chain}", f"ev={self.kind}"]
        parts.extend(f"{k}={v}" for k, v in self.fields)
        return " ".join(parts)


@dataclass
class PendingWithdrawal:
    pending_id: str
    statement: Statement
    proof: Proof
    recipient: str
    submitted_at: int
    finalize_at: int  # always submitted_at + relay_delay + epsilon
    status: str = PENDING


@dataclass
class NullifierRecord:
    first_seen: int
    provenance: str  # local (exposed here) or remote (installed via relay)
    burned: bool = False


@dataclass
class ContractState:
    chain_id: str
    denomination: int = 0
    epsilon: int = 1
    relay_delay: int = 1
    native: bool = True  # pays from balance; otherwise mints wrapped units
    hash_params: HashParams = DEFAULT_PARAMS
    initialised: bool = False
    tree: MerkleTree | None = None
    params: ProofParams | None = None
    balance: int = 0
    total_deposited: int = 0
    wrapped_minted: int = 0
    # local accumulator roots, mirrored from tree.root_history
    local_roots: list = field(default_factory=list)
    local_root_set: set = field(default_factory=set)
    local_root_digests: list = field(default_factory=lambda: [0])
    # nullifiers this contract exposed itself, in exposure order (committed)
    exposed_nullifiers: list = field(default_factory=list)
    exposed_digests: list = field(default_factory=lambda: [0])
    # relayed view of the other chain
    remote_roots: list = field(default_factory=list)
    remote_root_set: set = field(default_factory=set)
    remote_root_digests: list = field(default_factory=lambda: [0])
    remote_exposed: list = field(default_factory=list)
    remote_exposed_digests: list = field(default_factory=lambda: [0])
    remote_headers: list = field(default_factory=list)
    # full nullifier knowledge (local + remote), with provenance
    nullifiers: dict = field(default_factory=dict)
    pending_withdrawals: list = field(default_factory=list)
    commitments: set = field(default_factory=set)
    root_timestamps: dict = field(default_factory=dict)
    credits: dict = field(default_factory=dict)
    # lock-time incentive bookkeeping (governance tokens, separate supply)
    gov_minted: dict = field(default_factory=dict)
    gov_total: int = 0
    reward_ages: dict = field(default_factory=dict)
    events: list = field(default_factory=list)
    next_pending_seq: int = 0

    def emit(self, now: int, kind: str, *pairs) -> EventRecord:
        record = EventRecord(now, self.chain_id, kind, tuple(pairs))
        self.events.append(record)
        return record

    @property
    def state_commitment(self) -> FieldElement:
        return lightclient.state_commitment_value(
            self.local_root_digests[-1], self.exposed_digests[-1], self.hash_params
        )


def blank_contract(
    chain_id: str,
    *,
    epsilon: int = 1,
    relay_delay: int = 1,
    native: bool = True,
    hash_params: HashParams | None = None,
) -> ContractState:
    if hash_params is None:
        hash_params = DEFAULT_PARAMS
    if relay_delay < 1:
        raise ContractError("bad-delay", "relay_delay must be >= 1")
    if relay_delay + epsilon < 0:
        raise ContractError("bad-delay", "relay_delay + epsilon must be >= 0")
    return ContractState(
        chain_id=chain_id,
        epsilon=epsilon,
        relay_delay=relay_delay,
        native=native,
        hash_params=hash_params,
    )


def contract_setup(
    state: ContractState,
    genesis: BlockHeader,
    h: int,
    security: int,
    denomination: int,
    now: int = 0,
) -> ContractState:
    """Initialise: create the tree, install the remote genesis header, and
    seed both root lists with the (shared-height) empty root."""
    if state.initialised:
        raise ContractError("already-initialised", f"{state.chain_id} set up twice")
    if denomination <= 0:
        raise ContractError("bad-denomination", "denomination must be positive")
    if genesis.height != 0:
        raise ContractError("bad-genesis", "genesis must have height 0")
    if header_digest(genesis, state.hash_params) >= genesis.work_target:
        raise ContractError("bad-genesis", "genesis fails its own work target")
    state.tree = mt_setup(h, state.hash_params)
    state.params = zkrel.zk_setup(security, f"or-membership-h{h}", state.hash_params)
    state.denomination = denomination
    empty_root = state.tree.root
    state.local_roots.append(empty_root)
    state.local_root_set.add(empty_root)
    state.local_root_digests.append(hash2(0, empty_root, state.hash_params))
    # the remote side runs the same tree shape, so its empty root is known
    state.remote_roots.append(empty_root)
    state.remote_root_set.add(empty_root)
    state.remote_root_digests.append(hash2(0, empty_root, state.hash_params))
    state.root_timestamps[empty_root] = now
    state.remote_headers.append(genesis)
    state.initialised = True
    state.emit(
        now,
        "setup",
        ("height", str(h)),
        ("denomination", str(denomination)),
        ("epsilon", str(state.epsilon)),
        ("relay_delay", str(state.relay_delay)),
        ("empty_root", fe_hex(empty_root)),
    )
    return state


def _require_initialised(state: ContractState):
    if not state.initialised:
        raise ContractError("not-initialised", f"{state.chain_id} not set up")


def deposit(state: ContractState, amount: int, commitment: FieldElement, now: int) -> int:
    """Fixed-denomination deposit of a note commitment; returns the leaf index."""
    _require_initialised(state)
    if amount != state.denomination:
        raise ContractError(
            "wrong-amount", f"deposit {amount} != denomination {state.denomination}"
        )
    if commitment in state.commitments:
        raise ContractError("duplicate-commitment", "commitment already deposited")
    index = len(state.tree.leaves)
    if not mt_add(state.tree, commitment):
        raise ContractError("tree-full", "accumulator at capacity")
    state.commitments.add(commitment)
    new_root = state.tree.root
    state.local_roots.append(new_root)
    state.local_root_set.add(new_root)
    state.local_root_digests.append(
        hash2(state.local_root_digests[-1], new_root, state.hash_params)
    )
    state.root_timestamps.setdefault(new_root, now)
    state.balance += amount
    state.total_deposited += amount
    state.emit(
        now,
        "deposit",
        ("index", str(index)),
        ("commitment", fe_hex(commitment)),
        ("new_root", fe_hex(new_root)),
    )
    return index


def submit_withdrawal(
    state: ContractState, stmt: Statement, proof: Proof, recipient: str, now: int
) -> str:
    """Validate roots, nullifier freshness, and the proof; expose the
    nullifier immediately and queue payout for now + relay_delay + epsilon."""
    _require_initialised(state)
    if stmt.root_a not in state.local_root_set:
        raise ContractError("unknown-local-root", "root_a not in this contract's history")
    if stmt.root_b not in state.remote_root_set:
        raise ContractError("unknown-remote-root", "root_b not relayed to this contract")
    if stmt.nullifier in state.nullifiers:
        raise ContractError("nullifier-known", "nullifier already seen")
    if not zkrel.zk_verify(state.params, stmt, proof):
        raise ContractError("invalid-proof", "proof rejected")
    state.nullifiers[stmt.nullifier] = NullifierRecord(now, LOCAL)
    state.exposed_nullifiers.append(stmt.nullifier)
    state.exposed_digests.append(
        hash2(state.exposed_digests[-1], stmt.nullifier, state.hash_params)
    )
    pending_id = f"{state.chain_id}{state.next_pending_seq}"
    state.next_pending_seq += 1
    finalize_at = now + state.relay_delay + state.epsilon
    state.pending_withdrawals.append(
        PendingWithdrawal(pending_id, stmt, proof, recipient, now, finalize_at)
    )
    state.emit(
        now,
        "withdraw-submitted",
        ("wid", pending_id),
        ("root_a", fe_hex(stmt.root_a)),
        ("root_b", fe_hex(stmt.root_b)),
        ("nullifier", fe_hex(stmt.nullifier)),
        ("recipient", recipient),
        ("finalize_at", str(finalize_at)),
    )
    return pending_id


def process_tick(state: ContractState, now: int) -> list:
    """Finalize every still-pending withdrawal whose delay has elapsed."""
    _require_initialised(state)
    events = []
    for pw in state.pending_withdrawals:
        if pw.status != PENDING or pw.finalize_at > now:
            continue
        pw.status = FINALIZED
        if state.native:
            if state.balance < state.denomination:
                raise ContractError(
                    "insolvent", f"{state.chain_id} cannot cover withdrawal {pw.pending_id}"
                )
            state.balance -= state.denomination
            mode = "native"
        else:
            state.wrapped_minted += state.denomination
            mode = "wrapped"
        state.credits[pw.recipient] = state.credits.get(pw.recipient, 0) + state.denomination
        events.append(
            state.emit(
                now,
                "withdraw-finalized",
                ("wid", pw.pending_id),
                ("nullifier", fe_hex(pw.statement.nullifier)),
                ("recipient", pw.recipient),
                ("amount", str(state.denomination)),
                ("mode", mode),
            )
        )
    return events


def on_duplicate_nullifier(state: ContractState, sn: FieldElement, now: int) -> list:
    """A relayed copy of a locally exposed nullifier arrived: cancel any
    pending withdrawal carrying it and burn it permanently."""
    _require_initialised(state)
    record = state.nullifiers.get(sn)
    if record is None:
        raise ContractError("unknown-nullifier", "duplicate signal for unseen nullifier")
    record.burned = True
    events = []
    cancelled = 0
    for pw in state.pending_withdrawals:
        if pw.statement.nullifier == sn and pw.status == PENDING:
            pw.status = CANCELLED
            cancelled += 1
            events.append(
                state.emit(
                    now,
                    "withdraw-cancelled",
                    ("wid", pw.pending_id),
                    ("nullifier", fe_hex(sn)),
                    ("reason", "duplicate-nullifier"),
                )
            )
    events.append(
        state.emit(
            now,
            "duplicate-detected",
            ("nullifier", fe_hex(sn)),
            ("cancelled", str(cancelled)),
        )
    )
    return events


def on_relayed_header(state: ContractState, header: BlockHeader, now: int):
    """add_header plus transcript logging; silent on idempotent duplicates."""
    result = lightclient.add_header(state, header)
    if result.accepted:
        state.emit(now, "header-accepted", ("height", str(header.height)))
    elif result.reason != "duplicate":
        state.emit(
            now,
            "header-rejected",
            ("height", str(header.height)),
            ("reason", result.reason),
        )
    return result


def on_relayed_state(state: ContractState, att: StateAttestation, now: int) -> StateResult:
    """add_bridge_state plus the Modification-#2 duplicate check: newly relayed
    nullifiers that match a locally exposed one trigger cancellation."""
    result = lightclient.add_bridge_state(state, att, now)
    if not result.accepted:
        state.emit(now, "state-rejected", ("reason", result.reason))
        return result
    duplicates = []
    for sn in result.installed_nullifiers:
        known = state.nullifiers.get(sn)
        if known is None:
            state.nullifiers[sn] = NullifierRecord(now, REMOTE)
        elif known.provenance == LOCAL and not known.burned:
            duplicates.append(sn)
        # remote-provenance or already-burned copies are idempotent no-ops
    if result.installed_roots or result.installed_nullifiers:
        state.emit(
            now,
            "state-accepted",
            ("roots_installed", str(len(result.installed_roots))),
            ("nullifiers_installed", str(len(result.installed_nullifiers))),
        )
    for sn in duplicates:
        on_duplicate_nullifier(state, sn, now)
    return result


def conservation_holds(states) -> bool:
    """Sum of contract balances plus recipient credits equals total deposits
    plus wrapped mints, at every tick.  Burned notes stay locked forever."""
    balances = sum(s.balance for s in states)
    credits = sum(sum(s.credits.values()) for s in states)
    deposited = sum(s.total_deposited for s in states)
    wrapped = sum(s.wrapped_minted for s in states)
    return balances + credits == deposited + wrapped


def check_contract_invariants(state: ContractState):
    """Debug assertions used by the simulator after every tick."""
    assert state.balance >= 0, f"{state.chain_id} balance negative"
    assert state.local_roots == [r for _, r in state.tree.root_history], "root mirror broken"
    assert len(state.local_root_set) == len(set(state.local_roots))
    assert len(state.remote_roots) == len(state.remote_root_set)
    assert len(state.local_root_digests) == len(state.local_roots) + 1
    assert len(state.remote_root_digests) == len(state.remote_roots) + 1
    assert len(state.exposed_digests) == len(state.exposed_nullifiers) + 1
    for sn in state.exposed_nullifiers:
        assert sn in state.nullifiers
    finalized = [p for p in state.pending_withdrawals if p.status == FINALIZED]
    assert len({p.statement.nullifier for p in finalized}) == len(finalized)
