"""Privacy and storage analyses computed from the public event transcript.

Everything here deliberately uses only what an on-chain observer sees: the
event log and the final contract state.  Note secrets held by the simulator
are never consulted, so the anonymity numbers mean what they claim.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lightclient import BlockHeader


class MetricsError(ValueError):
    pass


FE_BYTES = 8
HEADER_BYTES = BlockHeader.encoded_size()

_WITHDRAW_KINDS = (
    "withdraw-submitted",
    "withdraw-finalized",
    "withdraw-cancelled",
    "withdraw-rejected",
)


def _root_leaf_counts(transcript) -> dict:
    """Per chain, map root (hex) -> number of deposits it commits to."""
    counts = {"A": {}, "B": {}}
    for e in transcript.events:
        fields = dict(e.fields)
        if e.kind == "setup":
            counts[e.chain][fields["empty_root"]] = 0
        elif e.kind == "deposit":
            counts[e.chain][fields["new_root"]] = int(fields["index"]) + 1
    return counts


def _other(chain: str) -> str:
    return "B" if chain == "A" else "A"


def anonymity_set(transcript, withdrawal_id: str) -> int:
    """Size of the set of deposits a withdrawal could plausibly spend: the
    deposits under its local root plus those under its relayed remote root."""
    counts = _root_leaf_counts(transcript)
    for e in transcript.events:
        if e.kind != "withdraw-submitted":
            continue
        fields = dict(e.fields)
        if fields["wid"] != withdrawal_id:
            continue
        local = counts[e.chain].get(fields["root_a"])
        remote = counts[_other(e.chain)].get(fields["root_b"])
        if local is None:
            raise MetricsError(f"root_a of {withdrawal_id} is not a known {e.chain} root")
        # a remote root that never appeared on the other chain (e.g. the
        # shared empty root before any deposit) contributes nothing
        return local + (remote or 0)
    raise MetricsError(f"no withdraw-submitted event with wid {withdrawal_id!r}")


@dataclass
class AnonymityReport:
    rows: list  # (wid, chain, anonymity_set) for each finalized withdrawal

    def minimum(self) -> int:
        return min((r[2] for r in self.rows), default=0)

    def mean(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r[2] for r in self.rows) / len(self.rows)

    def render_lines(self) -> list:
        lines = [f"{'wid':>6} {'chain':>5} {'anonymity_set':>14}"]
        for wid, chain, size in self.rows:
            lines.append(f"{wid:>6} {chain:>5} {size:>14}")
        return lines

    def summary(self) -> dict:
        return {
            "withdrawals": len(self.rows),
            "min": self.minimum(),
            "mean": round(self.mean(), 4),
        }


def anonymity_report(transcript) -> AnonymityReport:
    finalized = []
    for e in transcript.events:
        if e.kind == "withdraw-finalized":
            finalized.append((dict(e.fields)["wid"], e.chain))
    rows = [(wid, chain, anonymity_set(transcript, wid)) for wid, chain in finalized]
    return AnonymityReport(rows)


@dataclass
class LinkabilityFinding:
    event_index: int
    kind: str
    key: str
    value: str
    reason: str

    def to_line(self) -> str:
        return (
            f"event={self.event_index} kind={self.kind} field={self.key}"
            f" value={self.value} problem={self.reason}"
        )


@dataclass
class LinkabilityReport:
    findings: list

    @property
    def clean(self) -> bool:
        return not self.findings

    def render_lines(self) -> list:
        if self.clean:
            return ["no deposit-linking fields found in withdrawal events"]
        return [f.to_line() for f in self.findings]

    def summary(self) -> dict:
        return {"clean": self.clean, "findings": len(self.findings)}


_FORBIDDEN_KEYS = ("commitment", "leaf_index", "index")


def linkability_audit(transcript) -> LinkabilityReport:
    """Flag any withdrawal-side event field that would let an observer tie the
    withdrawal back to a specific deposit: a forbidden key, or a value equal
    to some deposit commitment."""
    commitments = set()
    for e in transcript.events:
        if e.kind == "deposit":
            commitments.add(dict(e.fields)["commitment"])
    findings = []
    for i, e in enumerate(transcript.events):
        if e.kind not in _WITHDRAW_KINDS:
            continue
        for key, value in e.fields:
            if key in _FORBIDDEN_KEYS:
                findings.append(
                    LinkabilityFinding(i, e.kind, key, value, "deposit-identifying field")
                )
            elif value in commitments:
                findings.append(
                    LinkabilityFinding(i, e.kind, key, value, "value equals a deposit commitment")
                )
    return LinkabilityReport(findings)


STORAGE_COLUMNS = ("chain", "local_roots", "remote_roots", "nullifiers", "remote_headers")


@dataclass
class StorageRow:
    chain: str
    local_roots: int
    remote_roots: int
    nullifiers: int
    remote_headers: int

    def bytes_by_kind(self) -> dict:
        return {
            "local_roots": self.local_roots * FE_BYTES,
            "remote_roots": self.remote_roots * FE_BYTES,
            "nullifiers": self.nullifiers * FE_BYTES,
            "remote_headers": self.remote_headers * HEADER_BYTES,
        }

    def total_bytes(self) -> int:
        return sum(self.bytes_by_kind().values())

    def dominant(self) -> str:
        by_kind = self.bytes_by_kind()
        return max(by_kind, key=lambda k: (by_kind[k], k))


@dataclass
class StorageReport:
    rows: list

    def row(self, chain: str) -> StorageRow:
        for r in self.rows:
            if r.chain == chain:
                return r
        raise MetricsError(f"no storage row for chain {chain!r}")

    def render_lines(self) -> list:
        lines = [
            " ".join(f"{c:>14}" for c in STORAGE_COLUMNS)
            + f" {'total_bytes':>12} {'dominant':>15}"
        ]
        for r in self.rows:
            lines.append(
                f"{r.chain:>14} {r.local_roots:>14} {r.remote_roots:>14}"
                f" {r.nullifiers:>14} {r.remote_headers:>14}"
                f" {r.total_bytes():>12} {r.dominant():>15}"
            )
        return lines

    def summary(self) -> dict:
        out = {}
        for r in self.rows:
            out[r.chain] = {
                "counts": {
                    "local_roots": r.local_roots,
                    "remote_roots": r.remote_roots,
                    "nullifiers": r.nullifiers,
                    "remote_headers": r.remote_headers,
                },
                "bytes": r.bytes_by_kind(),
                "total_bytes": r.total_bytes(),
                "dominant": r.dominant(),
            }
        return out


def storage_report(transcript) -> StorageReport:
    """Growth of each contract's persistent stores since setup.

    Setup itself installs the empty root (both sides) and the genesis header,
    so those are subtracted: the counts measure what bridging *added*.
    """
    rows = []
    for chain in ("A", "B"):
        c = transcript.contracts[chain]
        rows.append(
            StorageRow(
                chain=chain,
                local_roots=len(c.local_roots) - 1,
                remote_roots=len(c.remote_roots) - 1,
                nullifiers=len(c.nullifiers),
                remote_headers=len(c.remote_headers) - 1,
            )
        )
    return StorageReport(rows)
