"""Independent reference implementations used only to check the library.

These deliberately share no code with the package: the edit-distance
oracle fills the complete DP matrix the textbook way, and the shaping
oracle re-derives contextual forms from the vendored Unicode tables with
a different algorithm (explicit link-state scan instead of neighbor
classification).
"""

from importlib import resources


def dp_matrix_levenshtein(ref, hyp) -> int:
    """Plain full-matrix unit-cost Levenshtein."""
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]),
            )
    return d[n][m]


def _load_tables():
    pkg = resources.files("ocrforge.shaping")
    joining = {}
    for line in pkg.joinpath("data/arabic_joining.txt").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cps, _, cls = line.split(";")
        if ".." in cps:
            lo, hi = (int(x, 16) for x in cps.split(".."))
            for cp in range(lo, hi + 1):
                joining[cp] = cls
        else:
            joining[int(cps, 16)] = cls
    forms = {}
    ligs = {}
    for line in pkg.joinpath("data/presentation_forms.txt").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        f = line.split(";")
        if f[0] == "LIG":
            lam, alef = (int(x, 16) for x in f[1].split())
            ligs[(lam, alef)] = (int(f[2], 16), int(f[3], 16))
        else:
            forms[int(f[0], 16)] = [int(x, 16) if x else None for x in f[1:5]]
    return joining, forms, ligs


_JOINING, _FORMS, _LIGS = _load_tables()


def reference_shape(text: str) -> list[int]:
    """Visual-order presentation codepoints for an Arabic-only string
    (letters plus optional combining marks), computed by a link-state
    scan: each adjacent letter pair is either linked or not, then forms
    follow directly from the two link flags. Marks are dropped."""
    letters = [ord(c) for c in text if _JOINING.get(ord(c)) != "T"]
    n = len(letters)
    # linked[i] is True when letters[i] connects to letters[i+1].
    linked = []
    for i in range(n - 1):
        a, b = _JOINING.get(letters[i], "U"), _JOINING.get(letters[i + 1], "U")
        linked.append(a in "DC" and b in "DRC")

    logical = []
    i = 0
    while i < n:
        cp = letters[i]
        if (cp, letters[i + 1] if i + 1 < n else None) in _LIGS:
            iso, fin = _LIGS[(cp, letters[i + 1])]
            prev_link = i > 0 and linked[i - 1]
            logical.append(fin if prev_link else iso)
            i += 2
            continue
        prev_link = i > 0 and linked[i - 1]
        next_link = i < n - 1 and linked[i]
        forms = _FORMS.get(cp)
        if forms is None:
            logical.append(cp)
        else:
            iso, fin, ini, med = forms
            if prev_link and next_link:
                logical.append(med or fin or iso)
            elif prev_link:
                logical.append(fin or iso)
            elif next_link:
                logical.append(ini or iso)
            else:
                logical.append(iso)
        i += 1
    return list(reversed(logical))
