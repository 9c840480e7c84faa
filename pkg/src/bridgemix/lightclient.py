"""Minimal proof-of-work light client and bridge-state attestations.

A header commits to the source contract's public bridge state (its root list
and the list of nullifiers it has exposed) via a flat hash commitment over
the two running list digests.  Relayed headers are accepted only if they
extend the tracked chain with valid PoW; relayed state is accepted only if
its opening matches the referenced header's commitment and extends what the
receiver already knows.  Forks are rejected outright.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .field_hash import DEFAULT_PARAMS, FieldElement, HashParams, encode_fe, hash2, hash_bytes


class MiningError(Exception):
    pass


@dataclass(frozen=True)
class BlockHeader:
    height: int
    prev_hash: FieldElement
    state_commitment: FieldElement
    nonce: int
    work_target: FieldElement

    @staticmethod
    def encoded_size() -> int:
        return 5 * 8  # five 8-byte words on the wire


def header_digest(header: BlockHeader, params: HashParams | None = None) -> FieldElement:
    """hash_bytes over the canonical (height, prev_hash, state_commitment, nonce)."""
    blob = (
        header.height.to_bytes(8, "little")
        + encode_fe(header.prev_hash)
        + encode_fe(header.state_commitment)
        + header.nonce.to_bytes(8, "little")
    )
    return hash_bytes(blob, params)


def mine_header(
    height: int,
    prev_hash: FieldElement,
    state_commitment: FieldElement,
    work_target: FieldElement,
    params: HashParams | None = None,
    max_tries: int = 1 << 20,
) -> BlockHeader:
    """Deterministic nonce search from 0; raises if the target is too hard."""
    for nonce in range(max_tries):
        header = BlockHeader(height, prev_hash, state_commitment, nonce, work_target)
        if header_digest(header, params) < work_target:
            return header
    raise MiningError(f"no nonce below target after {max_tries} tries")


def chain_digest(values: Iterable[FieldElement], params: HashParams | None = None) -> FieldElement:
    """Running-absorb digest of a list: fold hash2 from 0."""
    digest = 0
    for v in values:
        digest = hash2(digest, v, params)
    return digest


def state_commitment_value(
    roots_digest: FieldElement, nullifiers_digest: FieldElement, params: HashParams | None = None
) -> FieldElement:
    return hash_bytes(encode_fe(roots_digest) + encode_fe(nullifiers_digest), params)


@dataclass(frozen=True)
class StateAttestation:
    """Claim that, as of the header at `header_index` on the receiver's tracked
    chain, the source contract's public lists were exactly `opening_*`, of
    which `new_*` are the trailing entries the relayer believes are news."""

    header_index: int
    new_roots: tuple
    new_nullifiers: tuple
    opening_roots: tuple
    opening_nullifiers: tuple


@dataclass(frozen=True)
class HeaderResult:
    accepted: bool
    reason: str  # ok | duplicate | fork | bad-height | broken-link | bad-target | bad-pow


@dataclass(frozen=True)
class StateResult:
    accepted: bool
    reason: str  # ok | unknown-header | bad-opening
    installed_roots: tuple = ()
    installed_nullifiers: tuple = ()


def validate_chain(headers: Sequence[BlockHeader], params: HashParams | None = None) -> bool:
    """Wholesale re-validation: every header meets its target and links."""
    for i, header in enumerate(headers):
        if header_digest(header, params) >= header.work_target:
            return False
        if i > 0:
            prev = headers[i - 1]
            if header.height != prev.height + 1:
                return False
            if header.prev_hash != header_digest(prev, params):
                return False
    return True


def add_header(state, header: BlockHeader) -> HeaderResult:
    """Append a relayed header iff PoW holds, it links, and height increments.

    `state` is a contract state exposing remote_headers and hash_params.
    """
    headers = state.remote_headers
    if not headers:
        return HeaderResult(False, "not-initialised")
    params = state.hash_params
    if header.height < len(headers):
        if header == headers[header.height]:
            return HeaderResult(False, "duplicate")
        return HeaderResult(False, "fork")
    if header.height != len(headers):
        return HeaderResult(False, "bad-height")
    if header.prev_hash != header_digest(headers[-1], params):
        return HeaderResult(False, "broken-link")
    if header.work_target != headers[0].work_target:
        return HeaderResult(False, "bad-target")
    if header_digest(header, params) >= header.work_target:
        return HeaderResult(False, "bad-pow")
    headers.append(header)
    return HeaderResult(True, "ok")


def _verify_opening(known: list, digests: list, opening: tuple, params) -> FieldElement | None:
    """Digest of `opening` given the receiver already verified `known`
    (digest history `digests`), or None if the opening contradicts it."""
    overlap = min(len(known), len(opening))
    if list(opening[:overlap]) != known[:overlap]:
        return None
    if len(opening) <= len(known):
        return digests[len(opening)]
    digest = digests[len(known)]
    for v in opening[len(known):]:
        digest = hash2(digest, v, params)
    return digest


def add_bridge_state(state, att: StateAttestation, now: int = 0) -> StateResult:
    """Verify an attestation against the referenced header and install the
    source-list entries the receiver has not seen yet.

    Installs roots into remote_roots and extends the remote_exposed mirror;
    merging the returned nullifiers into the receiver's nullifier set (with
    the duplicate check and cancellation) is the contract module's job.
    """
    params = state.hash_params
    if not 0 <= att.header_index < len(state.remote_headers):
        return StateResult(False, "unknown-header")
    header = state.remote_headers[att.header_index]

    roots_digest = _verify_opening(
        state.remote_roots, state.remote_root_digests, att.opening_roots, params
    )
    nulls_digest = _verify_opening(
        state.remote_exposed, state.remote_exposed_digests, att.opening_nullifiers, params
    )
    if roots_digest is None or nulls_digest is None:
        return StateResult(False, "bad-opening")
    if state_commitment_value(roots_digest, nulls_digest, params) != header.state_commitment:
        return StateResult(False, "bad-opening")
    if att.new_roots != att.opening_roots[len(att.opening_roots) - len(att.new_roots):]:
        return StateResult(False, "bad-opening")
    tail = len(att.opening_nullifiers) - len(att.new_nullifiers)
    if att.new_nullifiers != att.opening_nullifiers[tail:]:
        return StateResult(False, "bad-opening")

    installed_roots = tuple(att.opening_roots[len(state.remote_roots):])
    for root in installed_roots:
        state.remote_roots.append(root)
        state.remote_root_digests.append(
            hash2(state.remote_root_digests[-1], root, params)
        )
        state.remote_root_set.add(root)
        state.root_timestamps.setdefault(root, now)
    installed_nulls = tuple(att.opening_nullifiers[len(state.remote_exposed):])
    for sn in installed_nulls:
        state.remote_exposed.append(sn)
        state.remote_exposed_digests.append(
            hash2(state.remote_exposed_digests[-1], sn, params)
        )
    return StateResult(True, "ok", installed_roots, installed_nulls)
