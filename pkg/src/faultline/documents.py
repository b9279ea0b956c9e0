"""Input documents: a small JSON schema declaring alphabets, substitutions,
and an optional DPV, plus the bundled example documents.

Validation is strict: unknown fields are rejected everywhere, and every name
reference must resolve.  Parsing happens before any computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .dpv import DPVSubstitution
from .errors import ValidationError
from .substitution import Substitution

_DOC_KEYS = {"alphabets", "substitutions", "dpv", "options"}
_SUB_KEYS = {"alphabet", "rules"}
_DPV_KEYS = {"vertical", "horizontal", "row_sigma"}
_OPTION_KEYS = {
    "rounds", "max_word_len", "precision_bits", "max_tiles",
    "modulus_letter", "conjugacy_max_len",
}

DEFAULT_OPTIONS = {
    "rounds": 12,
    "max_word_len": 10 ** 6,
    "precision_bits": 64,
    "max_tiles": 200_000,
    "modulus_letter": None,
    "conjugacy_max_len": 8,
}


@dataclass(frozen=True)
class Document:
    alphabets: dict
    substitutions: dict
    dpv: Optional[DPVSubstitution]
    dpv_names: Optional[dict]     # {"vertical": name, "horizontal": [names]}
    options: dict

    def substitution(self, name):
        if name not in self.substitutions:
            raise ValidationError(f"unknown substitution {name!r}")
        return self.substitutions[name]

    def to_dict(self):
        subs = {}
        for name, s in sorted(self.substitutions.items()):
            alpha_name = next(
                a for a, letters in self.alphabets.items() if tuple(letters) == s.alphabet
            )
            subs[name] = {
                "alphabet": alpha_name,
                "rules": {
                    l.name: [s.letters[i].name for i in s.rules[l.id]] for l in s.letters
                },
            }
        out = {
            "alphabets": {k: list(v) for k, v in sorted(self.alphabets.items())},
            "substitutions": subs,
            "options": {k: self.options[k] for k in sorted(self.options)},
        }
        if self.dpv is not None:
            rho = self.dpv.vertical
            out["dpv"] = {
                "vertical": self.dpv_names["vertical"],
                "horizontal": list(self.dpv_names["horizontal"]),
                "row_sigma": {
                    rho.letters[v].name: [
                        self.dpv_names["horizontal"][k] for k in self.dpv.row_sigma[v]
                    ]
                    for v in range(rho.size)
                },
            }
        return out


def _require_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"unknown fields in {where}: {sorted(unknown)}")


def _parse_word(raw, where):
    if isinstance(raw, str):
        return list(raw)
    if isinstance(raw, list) and all(isinstance(x, str) for x in raw):
        return list(raw)
    raise ValidationError(f"{where} must be a string or a list of letter names")


def load_document(source):
    """Parse and validate an input document (path, JSON text, or dict)."""
    if isinstance(source, dict):
        raw = source
    else:
        text = source
        if not str(source).lstrip().startswith("{"):
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
    _require_keys(raw, _DOC_KEYS, "document")

    alphabets = {}
    for name, letters in (raw.get("alphabets") or {}).items():
        if (not isinstance(letters, list) or not letters
                or not all(isinstance(x, str) and x for x in letters)
                or len(set(letters)) != len(letters)):
            raise ValidationError(f"alphabet {name!r} must be a list of unique nonempty names")
        alphabets[name] = tuple(letters)
    if not alphabets:
        raise ValidationError("document declares no alphabets")

    substitutions = {}
    for name, spec in (raw.get("substitutions") or {}).items():
        _require_keys(spec, _SUB_KEYS, f"substitution {name!r}")
        if spec.get("alphabet") not in alphabets:
            raise ValidationError(f"substitution {name!r} references unknown alphabet "
                                  f"{spec.get('alphabet')!r}")
        letters = alphabets[spec["alphabet"]]
        rules = spec.get("rules")
        if not isinstance(rules, dict) or set(rules) != set(letters):
            raise ValidationError(f"substitution {name!r} must give exactly one rule per letter")
        parsed = {k: _parse_word(v, f"rule {name}.{k}") for k, v in rules.items()}
        substitutions[name] = Substitution(letters, parsed)
    if not substitutions:
        raise ValidationError("document declares no substitutions")

    dpv = None
    dpv_names = None
    if "dpv" in raw and raw["dpv"] is not None:
        spec = raw["dpv"]
        _require_keys(spec, _DPV_KEYS, "dpv")
        vname = spec.get("vertical")
        if vname not in substitutions:
            raise ValidationError(f"dpv.vertical references unknown substitution {vname!r}")
        hnames = spec.get("horizontal")
        if (not isinstance(hnames, list) or not hnames
                or any(h not in substitutions for h in hnames)):
            raise ValidationError("dpv.horizontal must list known substitutions")
        rho = substitutions[vname]
        row_sigma_raw = spec.get("row_sigma")
        if not isinstance(row_sigma_raw, dict) or set(row_sigma_raw) != set(rho.alphabet):
            raise ValidationError("dpv.row_sigma must give one row list per vertical letter")
        row_sigma = []
        for letter in rho.alphabet:
            entries = row_sigma_raw[letter]
            if not isinstance(entries, list):
                raise ValidationError(f"dpv.row_sigma[{letter!r}] must be a list")
            idx = []
            for e in entries:
                if isinstance(e, int):
                    if not 0 <= e < len(hnames):
                        raise ValidationError(f"dpv.row_sigma[{letter!r}] index {e} out of range")
                    idx.append(e)
                elif isinstance(e, str) and e in hnames:
                    idx.append(hnames.index(e))
                else:
                    raise ValidationError(
                        f"dpv.row_sigma[{letter!r}] entries must be horizontal names or indices"
                    )
            row_sigma.append(tuple(idx))
        dpv = DPVSubstitution(
            vertical=rho,
            horizontal=tuple(substitutions[h] for h in hnames),
            row_sigma=tuple(row_sigma),
        )
        dpv_names = {"vertical": vname, "horizontal": tuple(hnames)}

    options = dict(DEFAULT_OPTIONS)
    if "options" in raw and raw["options"] is not None:
        _require_keys(raw["options"], _OPTION_KEYS, "options")
        options.update(raw["options"])

    return Document(
        alphabets=alphabets,
        substitutions=substitutions,
        dpv=dpv,
        dpv_names=dpv_names,
        options=options,
    )


def bundled_names():
    return ("doubling_swap", "period_doubling", "row_thirds")


def bundled_document(name):
    if name not in bundled_names():
        raise ValidationError(f"unknown bundled document {name!r}; "
                              f"available: {', '.join(bundled_names())}")
    text = resources.files("faultline").joinpath("data", f"{name}.json").read_text("utf-8")
    return load_document(text)
