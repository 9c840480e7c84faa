"""Deterministic discrete-event simulation of two bridged chains.

Integer ticks; within each tick the phases run in a fixed order:

    DELIVER   relayed headers/state scheduled for this tick arrive
    USER      scripted deposits, withdrawals, and reward claims execute
    MINE      each chain mines one header committing its current state
    RELAY     uncensored relayers snapshot news and schedule delivery at +delay
    FINALIZE  pending withdrawals whose delay elapsed pay out

Detection therefore precedes finalization within a tick, which is exactly the
boundary the delayed-withdrawal safety argument needs.  The whole run is a
pure function of (scenario, seed).
"""
from __future__ import annotations

import dataclasses
import random
import re
from dataclasses import dataclass

from . import contract as contract_mod
from . import incentives as incentives_mod
from .contract import ContractError, ContractState
from .field_hash import P, fe_hex, hash2, make_params
from .lightclient import (
    StateAttestation,
    header_digest,
    mine_header,
    state_commitment_value,
)
from .merkle import mt_path, zero_subtree_roots
from .zkrel import (
    DepositNote,
    Statement,
    UnsatisfiedWitnessError,
    Witness,
    make_note,
    zk_prove,
)

CHAINS = ("A", "B")

USER_ACTIONS = ("deposit", "submit_withdrawal", "incentive_claim")

_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


class ScenarioError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"scenario field '{field_name}': {message}")
        self.field_name = field_name


class SimInvariantError(Exception):
    """A protocol invariant broke mid-run; carries the partial transcript."""

    def __init__(self, message: str, transcript: "Transcript"):
        super().__init__(message)
        self.transcript = transcript


@dataclass(frozen=True)
class SimEvent:
    at: int
    target: str  # chain id
    action: str
    payload: tuple  # ordered (key, value) pairs

    def arg(self, key, default=None):
        for k, v in self.payload:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class RelayerSpec:
    id: str
    delay: int
    censored: bool = False
    honest: bool = True  # dishonest relayers forward headers but withhold state


@dataclass(frozen=True)
class AdversarySpec:
    """Double-withdraw attacker: one note, two submissions gap ticks apart."""

    note: str
    deposit_chain: str
    deposit_at: int
    first_chain: str
    first_at: int
    gap: int


@dataclass(frozen=True)
class RewardSpec:
    rate: int
    min_lock: int


@dataclass(frozen=True)
class Scenario:
    seed: int
    horizon: int
    tree_height: int = 4
    denomination: int = 10
    epsilon: int = 1
    relay_delay: int = 2  # the protocol bound D
    native_chain: str = "A"
    pow_shift: int = 2  # work target = p >> pow_shift
    security: int = 128
    hash_rounds: int = 64
    name: str = "scenario"
    relayers: tuple = ()
    events: tuple = ()
    adversary: AdversarySpec | None = None
    rewards: tuple = ()  # ordered (chain, RewardSpec) pairs

    def reward_for(self, chain: str) -> RewardSpec | None:
        for c, spec in self.rewards:
            if c == chain:
                return spec
        return None


def other_chain(chain: str) -> str:
    return "B" if chain == "A" else "A"


def validate_scenario(sc: Scenario, allow_negative_epsilon: bool = False):
    if sc.horizon < 1:
        raise ScenarioError("horizon", "must be >= 1")
    if not 1 <= sc.tree_height <= 32:
        raise ScenarioError("tree_height", "must be in [1, 32]")
    if sc.denomination < 1:
        raise ScenarioError("denomination", "must be >= 1")
    if sc.relay_delay < 1:
        raise ScenarioError("relay_delay", "must be >= 1")
    if sc.epsilon < 0 and not allow_negative_epsilon:
        raise ScenarioError("epsilon", "must be >= 0 (negative only via override)")
    if sc.relay_delay + sc.epsilon < 0:
        raise ScenarioError("epsilon", "relay_delay + epsilon must be >= 0")
    if sc.native_chain not in CHAINS:
        raise ScenarioError("native_chain", "must be 'A' or 'B'")
    if not 1 <= sc.pow_shift <= 32:
        raise ScenarioError("pow_shift", "must be in [1, 32]")
    if sc.hash_rounds < 1:
        raise ScenarioError("hash_rounds", "must be >= 1")
    if not sc.relayers:
        raise ScenarioError("relayers", "at least one relayer required")
    for i, spec in enumerate(sc.relayers):
        if spec.delay < 1:
            raise ScenarioError(f"relayers[{i}].delay", "must be >= 1")
        if not _NAME_RE.match(spec.id):
            raise ScenarioError(f"relayers[{i}].id", "invalid identifier")
    for i, ev in enumerate(sc.events):
        where = f"events[{i}]"
        if not 0 <= ev.at < sc.horizon:
            raise ScenarioError(f"{where}.at", f"tick {ev.at} outside [0, {sc.horizon})")
        if ev.target not in CHAINS:
            raise ScenarioError(f"{where}.chain", "must be 'A' or 'B'")
        if ev.action not in USER_ACTIONS:
            raise ScenarioError(f"{where}.action", f"unknown action {ev.action!r}")
        if not ev.arg("note"):
            raise ScenarioError(f"{where}.note", "note id required")
        if ev.action == "submit_withdrawal" and not _NAME_RE.match(ev.arg("recipient", "")):
            raise ScenarioError(f"{where}.recipient", "recipient required")
        if ev.action == "incentive_claim":
            if not _NAME_RE.match(ev.arg("claimant", "")):
                raise ScenarioError(f"{where}.claimant", "claimant required")
            if sc.reward_for(ev.target) is None:
                raise ScenarioError(f"{where}", f"no reward scheme configured on {ev.target}")
    adv = sc.adversary
    if adv is not None:
        if adv.deposit_chain not in CHAINS:
            raise ScenarioError("adversary.deposit_chain", "must be 'A' or 'B'")
        if adv.first_chain not in CHAINS:
            raise ScenarioError("adversary.first_chain", "must be 'A' or 'B'")
        if adv.deposit_at < 0:
            raise ScenarioError("adversary.deposit_at", "must be >= 0")
        if adv.first_at < adv.deposit_at + sc.relay_delay:
            raise ScenarioError(
                "adversary.first_at",
                "must be >= deposit_at + relay_delay so either chain can verify",
            )
        if adv.gap < 0:
            raise ScenarioError("adversary.gap", "must be >= 0")
        last = adv.first_at + adv.gap
        if last >= sc.horizon:
            raise ScenarioError("horizon", f"too short for adversary submissions (need > {last})")
    for chain, spec in sc.rewards:
        if chain not in CHAINS:
            raise ScenarioError("rewards", f"unknown chain {chain!r}")
        if spec.rate < 0:
            raise ScenarioError(f"rewards.{chain}.rate", "must be >= 0")
        if spec.min_lock < 0:
            raise ScenarioError(f"rewards.{chain}.min_lock", "must be >= 0")


@dataclass(frozen=True)
class DepositInfo:
    chain: str
    index: int
    tick: int
    root: int


@dataclass
class Transcript:
    """Ordered public event log of one run, plus final-state handles for the
    analyses that need them."""

    scenario: Scenario
    events: list
    contracts: dict
    notes: dict
    deposits: dict
    withdrawal_notes: dict  # pending id -> note id (simulator-side knowledge)

    def render_lines(self) -> list:
        return [e.to_line() for e in self.events]

    def render(self) -> str:
        return "\n".join(self.render_lines()) + "\n"

    def counts(self) -> dict:
        out: dict = {}
        for e in self.events:
            out[e.kind] = out.get(e.kind, 0) + 1
        return dict(sorted(out.items()))

    def summary(self) -> dict:
        return {
            "scenario": self.scenario.name,
            "seed": self.scenario.seed,
            "horizon": self.scenario.horizon,
            "events": len(self.events),
            "by_kind": self.counts(),
        }


@dataclass
class _ChainNode:
    name: str
    contract: ContractState
    headers: list  # the chain's own full header chain, genesis first


@dataclass
class _Cursor:
    headers: int = 1  # genesis is pre-installed at setup
    roots: int = 1    # the empty root is pre-seeded at setup
    nulls: int = 0


class _Engine:
    def __init__(self, scenario: Scenario, allow_negative_epsilon: bool = False):
        validate_scenario(scenario, allow_negative_epsilon)
        self.scenario = scenario
        self.params = make_params(scenario.hash_rounds)
        self.target = P >> scenario.pow_shift
        self.events: list = []  # shared, globally ordered transcript
        self.nodes: dict = {}
        for chain in CHAINS:
            c = contract_mod.blank_contract(
                chain,
                epsilon=scenario.epsilon,
                relay_delay=scenario.relay_delay,
                native=(chain == scenario.native_chain),
                hash_params=self.params,
            )
            c.events = self.events
            self.nodes[chain] = _ChainNode(chain, c, [])
        # both chains share tree shape, so both genesis headers commit the
        # same empty state; mine one header and install it on both sides
        empty_root = zero_subtree_roots(scenario.tree_height, self.params)[-1]
        initial_commitment = state_commitment_value(
            hash2(0, empty_root, self.params), 0, self.params
        )
        genesis = mine_header(0, 0, initial_commitment, self.target, self.params)
        for chain in CHAINS:
            contract_mod.contract_setup(
                self.nodes[chain].contract,
                genesis,
                scenario.tree_height,
                scenario.security,
                scenario.denomination,
                now=0,
            )
            self.nodes[chain].headers.append(genesis)
        self.reward_cfgs = {
            chain: incentives_mod.RewardConfig(rate=spec.rate, min_lock=spec.min_lock)
            for chain, spec in scenario.rewards
        }
        self.notes: dict = {}
        self.deposits: dict = {}
        self.withdrawal_notes: dict = {}
        self.deliveries: dict = {}  # tick -> ordered list of (kind, chain, payload)
        self.relayer_cursors = {
            (spec.id, src): _Cursor()
            for spec in scenario.relayers
            for src in CHAINS
        }
        self.user_events: dict = {}
        for ev in scenario.events:
            self.user_events.setdefault(ev.at, []).append(ev)
        for ev in _adversary_events(scenario.adversary):
            self.user_events.setdefault(ev.at, []).append(ev)

    # -- note/derivation helpers ------------------------------------------
    def note(self, note_id: str) -> DepositNote:
        existing = self.notes.get(note_id)
        if existing is not None:
            return existing
        rng = random.Random(f"{self.scenario.seed}:{note_id}")
        note = make_note(rng.randrange(P), rng.randrange(P), self.params)
        self.notes[note_id] = note
        return note

    def _leaf_count_for_root(self, chain: str, root: int) -> int:
        for index, r in self.nodes[chain].contract.tree.root_history:
            if r == root:
                return index + 1
        return -1

    def build_withdrawal(self, note_id: str, on_chain: str, allow_unproven=False):
        dep = self.deposits.get(note_id)
        if dep is None:
            raise _UserActionError("no-deposit", "note was never deposited")
        note = self.note(note_id)
        target = self.nodes[on_chain].contract
        source = self.nodes[dep.chain].contract
        if dep.chain == on_chain:
            selector = 0
            root_a = target.local_roots[-1]
            root_b = target.remote_roots[-1]
            path = mt_path(target.tree, dep.index)
        else:
            selector = 1
            root_a = target.local_roots[-1]
            # newest relayed root that already contains the deposit; if none
            # has been relayed yet, target the source's live root and let the
            # contract reject it as unknown
            root_b = source.local_roots[-1]
            for root in reversed(target.remote_roots):
                if self._leaf_count_for_root(dep.chain, root) > dep.index:
                    root_b = root
                    break
            count = self._leaf_count_for_root(dep.chain, root_b)
            path = mt_path(source.tree, dep.index, leaf_count=count if count > 0 else None)
        stmt = Statement(root_a, root_b, note.nullifier)
        try:
            proof = zk_prove(target.params, stmt, Witness(note.r, note.s, path, selector))
        except UnsatisfiedWitnessError as err:
            raise _UserActionError("prove-refused", str(err))
        return stmt, proof

    def build_reward_claim(self, note_id: str, on_chain: str, claimant: str, age, now: int):
        dep = self.deposits.get(note_id)
        if dep is None:
            raise _UserActionError("no-deposit", "note was never deposited")
        if dep.chain != on_chain:
            raise _UserActionError("wrong-chain", "claims are made where the note is locked")
        note = self.note(note_id)
        c = self.nodes[on_chain].contract
        root_a = dep.root
        root_b = c.remote_roots[-1]
        path = mt_path(c.tree, dep.index, leaf_count=dep.index + 1)
        stmt = Statement(root_a, root_b, note.nullifier)
        try:
            proof = zk_prove(c.params, stmt, Witness(note.r, note.s, path, 0))
        except UnsatisfiedWitnessError as err:
            raise _UserActionError("prove-refused", str(err))
        if age is None:
            age = now - dep.tick  # honest agents claim the true lock duration
        return incentives_mod.RewardClaim(stmt, proof, int(age), claimant)

    # -- tick phases --------------------------------------------------------
    def _deliver(self, now: int):
        for kind, chain, payload in self.deliveries.pop(now, []):
            c = self.nodes[chain].contract
            if kind == "header":
                contract_mod.on_relayed_header(c, payload, now)
            else:
                contract_mod.on_relayed_state(c, payload, now)

    def _user(self, now: int):
        for ev in self.user_events.get(now, []):
            c = self.nodes[ev.target].contract
            note_id = ev.arg("note")
            if ev.action == "deposit":
                note = self.note(note_id)
                try:
                    index = contract_mod.deposit(
                        c, self.scenario.denomination, note.commitment, now
                    )
                except ContractError as err:
                    c.emit(
                        now,
                        "deposit-rejected",
                        ("commitment", fe_hex(note.commitment)),
                        ("reason", err.reason),
                    )
                    continue
                self.deposits[note_id] = DepositInfo(
                    ev.target, index, now, c.local_roots[-1]
                )
            elif ev.action == "submit_withdrawal":
                recipient = ev.arg("recipient", "user")
                try:
                    stmt, proof = self.build_withdrawal(note_id, ev.target)
                    wid = contract_mod.submit_withdrawal(c, stmt, proof, recipient, now)
                    self.withdrawal_notes[wid] = note_id
                except (_UserActionError, ContractError) as err:
                    c.emit(
                        now,
                        "withdraw-rejected",
                        ("nullifier", fe_hex(self.note(note_id).nullifier)),
                        ("recipient", recipient),
                        ("reason", err.reason),
                    )
            elif ev.action == "incentive_claim":
                claimant = ev.arg("claimant", "user")
                try:
                    claim = self.build_reward_claim(
                        note_id, ev.target, claimant, ev.arg("age"), now
                    )
                    incentives_mod.claim_reward(c, self.reward_cfgs[ev.target], claim, now)
                except (_UserActionError, incentives_mod.RewardError) as err:
                    c.emit(
                        now,
                        "reward-rejected",
                        ("nullifier", fe_hex(self.note(note_id).nullifier)),
                        ("claimant", claimant),
                        ("reason", err.reason),
                    )

    def _mine(self, now: int):
        for chain in CHAINS:
            node = self.nodes[chain]
            header = mine_header(
                len(node.headers),
                header_digest(node.headers[-1], self.params),
                node.contract.state_commitment,
                self.target,
                self.params,
            )
            node.headers.append(header)
            node.contract.emit(now, "header-mined", ("height", str(header.height)))

    def _relay(self, now: int):
        for spec in self.scenario.relayers:
            if spec.censored:
                continue
            for src in CHAINS:
                dst = other_chain(src)
                cursor = self.relayer_cursors[(spec.id, src)]
                node = self.nodes[src]
                bucket = self.deliveries.setdefault(now + spec.delay, [])
                for header in node.headers[cursor.headers:]:
                    bucket.append(("header", dst, header))
                cursor.headers = len(node.headers)
                if not spec.honest:
                    continue  # withholds bridge state
                c = node.contract
                new_roots = tuple(c.local_roots[cursor.roots:])
                new_nulls = tuple(c.exposed_nullifiers[cursor.nulls:])
                if new_roots or new_nulls:
                    att = StateAttestation(
                        header_index=node.headers[-1].height,
                        new_roots=new_roots,
                        new_nullifiers=new_nulls,
                        opening_roots=tuple(c.local_roots),
                        opening_nullifiers=tuple(c.exposed_nullifiers),
                    )
                    bucket.append(("state", dst, att))
                    cursor.roots = len(c.local_roots)
                    cursor.nulls = len(c.exposed_nullifiers)

    def _finalize(self, now: int):
        for chain in CHAINS:
            contract_mod.process_tick(self.nodes[chain].contract, now)

    def _transcript(self) -> Transcript:
        return Transcript(
            scenario=self.scenario,
            events=self.events,
            contracts={chain: self.nodes[chain].contract for chain in CHAINS},
            notes=dict(self.notes),
            deposits=dict(self.deposits),
            withdrawal_notes=dict(self.withdrawal_notes),
        )

    def run(self) -> Transcript:
        contracts = [self.nodes[chain].contract for chain in CHAINS]
        for now in range(self.scenario.horizon):
            self._deliver(now)
            self._user(now)
            self._mine(now)
            self._relay(now)
            self._finalize(now)
            try:
                for c in contracts:
                    contract_mod.check_contract_invariants(c)
                if not contract_mod.conservation_holds(contracts):
                    raise AssertionError("value conservation broken")
            except AssertionError as err:
                raise SimInvariantError(f"tick {now}: {err}", self._transcript())
        return self._transcript()


class _UserActionError(Exception):
    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason


def _adversary_events(adv: AdversarySpec | None) -> list:
    if adv is None:
        return []
    second_chain = other_chain(adv.first_chain)
    return [
        SimEvent(adv.deposit_at, adv.deposit_chain, "deposit", (("note", adv.note),)),
        SimEvent(
            adv.first_at,
            adv.first_chain,
            "submit_withdrawal",
            (("note", adv.note), ("recipient", "adv-first")),
        ),
        SimEvent(
            adv.first_at + adv.gap,
            second_chain,
            "submit_withdrawal",
            (("note", adv.note), ("recipient", "adv-second")),
        ),
    ]


def run(scenario: Scenario, allow_negative_epsilon: bool = False) -> Transcript:
    """Execute a scenario; the transcript is a pure function of (scenario, seed)."""
    return _Engine(scenario, allow_negative_epsilon).run()


# -- race exploration ---------------------------------------------------------

@dataclass(frozen=True)
class RaceRow:
    t_prime: int
    order: str  # "A->B" or "B->A"
    payouts: int
    cancellations: int
    second_rejected: bool
    honest_payouts: int


@dataclass
class RaceReport:
    relay_delay: int
    epsilon: int
    rows: list

    @property
    def double_payout_rows(self) -> list:
        return [row for row in self.rows if row.payouts > 1]

    def max_payouts(self) -> int:
        return max((row.payouts for row in self.rows), default=0)

    def render_lines(self) -> list:
        lines = [
            f"# race sweep: D={self.relay_delay} epsilon={self.epsilon}",
            f"{'t_prime':>8} {'order':>6} {'payouts':>8} {'cancels':>8} {'second_rejected':>16} {'honest_payouts':>15}",
        ]
        for row in self.rows:
            lines.append(
                f"{row.t_prime:>8} {row.order:>6} {row.payouts:>8} {row.cancellations:>8}"
                f" {str(row.second_rejected).lower():>16} {row.honest_payouts:>15}"
            )
        return lines

    def summary(self) -> dict:
        return {
            "relay_delay": self.relay_delay,
            "epsilon": self.epsilon,
            "runs": len(self.rows),
            "max_payouts": self.max_payouts(),
            "double_payouts": len(self.double_payout_rows),
        }


def _count_note_events(transcript: Transcript, nullifier_hex: str):
    payouts = cancels = 0
    rejected = False
    for e in transcript.events:
        fields = dict(e.fields)
        if fields.get("nullifier") != nullifier_hex:
            continue
        if e.kind == "withdraw-finalized":
            payouts += 1
        elif e.kind == "withdraw-cancelled":
            cancels += 1
        elif e.kind == "withdraw-rejected" and fields.get("reason") == "nullifier-known":
            rejected = True
    return payouts, cancels, rejected


def explore_races(base: Scenario, t_prime_range) -> RaceReport:
    """One run per (t', submission order); reports payouts and cancellations
    for the adversary's note in each interleaving."""
    if base.adversary is None:
        raise ScenarioError("adversary", "race exploration requires an adversary spec")
    t_primes = list(t_prime_range)
    if not t_primes:
        raise ScenarioError("t_prime_range", "empty range")
    rows = []
    for t_prime in t_primes:
        for first_chain in (base.adversary.first_chain, other_chain(base.adversary.first_chain)):
            adv = dataclasses.replace(base.adversary, first_chain=first_chain, gap=t_prime)
            needed = adv.first_at + t_prime + 2 * base.relay_delay + abs(base.epsilon) + 4
            scenario = dataclasses.replace(
                base,
                adversary=adv,
                horizon=max(base.horizon, needed),
                name=f"{base.name}/t{t_prime}/{first_chain}",
            )
            transcript = run(scenario, allow_negative_epsilon=True)
            adv_sn = fe_hex(transcript.notes[adv.note].nullifier)
            payouts, cancels, rejected = _count_note_events(transcript, adv_sn)
            honest = sum(
                _count_note_events(transcript, fe_hex(note.nullifier))[0]
                for note_id, note in transcript.notes.items()
                if note_id != adv.note
            )
            rows.append(
                RaceRow(
                    t_prime=t_prime,
                    order=f"{first_chain}->{other_chain(first_chain)}",
                    payouts=payouts,
                    cancellations=cancels,
                    second_rejected=rejected,
                    honest_payouts=honest,
                )
            )
    return RaceReport(base.relay_delay, base.epsilon, rows)


def payout_table(transcript: Transcript) -> list:
    """Per-nullifier payout/cancellation tallies for a single run."""
    rows = []
    for note_id, note in transcript.notes.items():
        sn = fe_hex(note.nullifier)
        payouts, cancels, rejected = _count_note_events(transcript, sn)
        rows.append((sn, payouts, cancels, rejected))
    return rows


# -- scenario parsing ---------------------------------------------------------

def _expect_int(value, field_name, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(field_name, f"expected integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(field_name, f"must be >= {minimum}")
    return value


def _expect_str(value, field_name):
    if not isinstance(value, str):
        raise ScenarioError(field_name, f"expected string, got {value!r}")
    return value


def _expect_bool(value, field_name):
    if not isinstance(value, bool):
        raise ScenarioError(field_name, f"expected boolean, got {value!r}")
    return value


def _check_keys(mapping, allowed, where):
    for key in mapping:
        if key not in allowed:
            raise ScenarioError(f"{where}.{key}" if where else str(key), "unknown field")


_EVENT_KEYS = {"at", "chain", "action", "note", "recipient", "claimant", "age"}
_TOP_KEYS = {
    "seed", "horizon", "tree_height", "denomination", "epsilon", "relay_delay",
    "native_chain", "pow_shift", "security", "hash_rounds", "name",
    "relayers", "events", "adversary", "rewards",
}


def scenario_from_dict(data: dict, name: str = "scenario") -> Scenario:
    """Build a Scenario from parsed structured text, with field-precise errors."""
    if not isinstance(data, dict):
        raise ScenarioError("<root>", "scenario file must be a mapping")
    _check_keys(data, _TOP_KEYS, "")
    if "seed" not in data:
        raise ScenarioError("seed", "required")
    if "horizon" not in data:
        raise ScenarioError("horizon", "required")
    seed = _expect_int(data["seed"], "seed")
    horizon = _expect_int(data["horizon"], "horizon", minimum=1)
    relay_delay = _expect_int(data.get("relay_delay", 2), "relay_delay", minimum=1)

    relayers = []
    raw_relayers = data.get("relayers", [{"id": "relayer0", "delay": relay_delay}])
    if not isinstance(raw_relayers, list):
        raise ScenarioError("relayers", "expected a list")
    for i, entry in enumerate(raw_relayers):
        where = f"relayers[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(where, "expected a mapping")
        _check_keys(entry, {"id", "delay", "censored", "honest"}, where)
        relayers.append(
            RelayerSpec(
                id=_expect_str(entry.get("id", f"relayer{i}"), f"{where}.id"),
                delay=_expect_int(entry.get("delay", relay_delay), f"{where}.delay", 1),
                censored=_expect_bool(entry.get("censored", False), f"{where}.censored"),
                honest=_expect_bool(entry.get("honest", True), f"{where}.honest"),
            )
        )

    events = []
    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        raise ScenarioError("events", "expected a list")
    for i, entry in enumerate(raw_events):
        where = f"events[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError(where, "expected a mapping")
        _check_keys(entry, _EVENT_KEYS, where)
        for required in ("at", "chain", "action"):
            if required not in entry:
                raise ScenarioError(f"{where}.{required}", "required")
        action = _expect_str(entry["action"], f"{where}.action")
        payload = []
        if "note" in entry:
            payload.append(("note", _expect_str(entry["note"], f"{where}.note")))
        if "recipient" in entry:
            payload.append(("recipient", _expect_str(entry["recipient"], f"{where}.recipient")))
        if "claimant" in entry:
            payload.append(("claimant", _expect_str(entry["claimant"], f"{where}.claimant")))
        if "age" in entry:
            payload.append(("age", _expect_int(entry["age"], f"{where}.age", 0)))
        events.append(
            SimEvent(
                at=_expect_int(entry["at"], f"{where}.at", 0),
                target=_expect_str(entry["chain"], f"{where}.chain"),
                action=action,
                payload=tuple(payload),
            )
        )

    adversary = None
    if data.get("adversary") is not None:
        raw = data["adversary"]
        if not isinstance(raw, dict):
            raise ScenarioError("adversary", "expected a mapping")
        _check_keys(
            raw, {"note", "deposit_chain", "deposit_at", "first_chain", "first_at", "gap"},
            "adversary",
        )
        for required in ("note", "deposit_chain", "deposit_at", "first_chain", "first_at"):
            if required not in raw:
                raise ScenarioError(f"adversary.{required}", "required")
        adversary = AdversarySpec(
            note=_expect_str(raw["note"], "adversary.note"),
            deposit_chain=_expect_str(raw["deposit_chain"], "adversary.deposit_chain"),
            deposit_at=_expect_int(raw["deposit_at"], "adversary.deposit_at", 0),
            first_chain=_expect_str(raw["first_chain"], "adversary.first_chain"),
            first_at=_expect_int(raw["first_at"], "adversary.first_at", 0),
            gap=_expect_int(raw.get("gap", 0), "adversary.gap", 0),
        )

    rewards = []
    raw_rewards = data.get("rewards")
    if raw_rewards is not None:
        if not isinstance(raw_rewards, dict):
            raise ScenarioError("rewards", "expected a mapping")
        if {"rate", "min_lock"} & set(raw_rewards.keys()):
            _check_keys(raw_rewards, {"rate", "min_lock"}, "rewards")
            spec = RewardSpec(
                rate=_expect_int(raw_rewards.get("rate", 0), "rewards.rate", 0),
                min_lock=_expect_int(raw_rewards.get("min_lock", 0), "rewards.min_lock", 0),
            )
            rewards = [("A", spec), ("B", spec)]
        else:
            for chain, entry in raw_rewards.items():
                where = f"rewards.{chain}"
                key = str(chain).upper()
                if key not in CHAINS:
                    raise ScenarioError(where, "chain must be A or B")
                if not isinstance(entry, dict):
                    raise ScenarioError(where, "expected a mapping")
                _check_keys(entry, {"rate", "min_lock"}, where)
                rewards.append(
                    (
                        key,
                        RewardSpec(
                            rate=_expect_int(entry.get("rate", 0), f"{where}.rate", 0),
                            min_lock=_expect_int(entry.get("min_lock", 0), f"{where}.min_lock", 0),
                        ),
                    )
                )

    scenario = Scenario(
        seed=seed,
        horizon=horizon,
        tree_height=_expect_int(data.get("tree_height", 4), "tree_height", 1),
        denomination=_expect_int(data.get("denomination", 10), "denomination", 1),
        epsilon=_expect_int(data.get("epsilon", 1), "epsilon"),
        relay_delay=relay_delay,
        native_chain=_expect_str(data.get("native_chain", "A"), "native_chain"),
        pow_shift=_expect_int(data.get("pow_shift", 2), "pow_shift", 1),
        security=_expect_int(data.get("security", 128), "security", 1),
        hash_rounds=_expect_int(data.get("hash_rounds", 64), "hash_rounds", 1),
        name=_expect_str(data.get("name", name), "name"),
        relayers=tuple(relayers),
        events=tuple(events),
        adversary=adversary,
        rewards=tuple(rewards),
    )
    validate_scenario(scenario)
    return scenario
