"""Embedding-based language similarity.

A language's similarity to a target is the gap between the mean cosine of
aligned parallel-sentence embedding pairs and the mean cosine over all
misaligned pairs. The misaligned mean is exact (all n(n-1) pairs), computed
from summed vectors rather than a double loop.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, InputError, InsufficientDataError

_NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingSet:
    """Unit-normalized sentence embeddings for one language.

    Row i in two sets built from the same parallel corpus refers to the same
    sentence; alignment is positional.
    """

    language: str
    vectors: np.ndarray  # shape (n, d), rows unit L2 norm

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @staticmethod
    def from_rows(language: str, rows) -> "EmbeddingSet":
        """Build a set from raw rows, normalizing each row to unit L2 norm."""
        arr = np.asarray(rows, dtype=np.float64)
        if arr.ndim != 2:
            raise InputError(f"{language}: embeddings must be a 2-D array of rows")
        n, d = arr.shape
        if n < 2:
            raise InsufficientDataError(
                f"{language}: need at least 2 sentences, got {n}"
            )
        if d < 1:
            raise InputError(f"{language}: embedding dimension must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise InputError(f"{language}: embeddings contain non-finite values")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0.0):
            raise InputError(f"{language}: zero-norm embedding row")
        return EmbeddingSet(language, arr / norms[:, None])


def cosine_gap(source: EmbeddingSet, target: EmbeddingSet) -> float:
    """Aligned-pair mean cosine minus misaligned-pair mean cosine.

    The misaligned mean over all n(n-1) ordered pairs (i, j), i != j, is
    computed exactly via the summed-vector identity:
    mean_all = (sum h_s) . (sum h_t) / n^2 and
    mean_misaligned = (n^2 * mean_all - sum_i aligned_i) / (n^2 - n).
    """
    if source.d != target.d:
        raise AlignmentError(
            f"dimension mismatch: {source.language} has d={source.d}, "
            f"{target.language} has d={target.d}"
        )
    if source.n != target.n:
        raise AlignmentError(
            f"corpus size mismatch: {source.language} has n={source.n}, "
            f"{target.language} has n={target.n}"
        )
    n = source.n
    if n < 2:
        raise InsufficientDataError("need n >= 2 for the misaligned-pair mean")
    aligned = np.einsum("ij,ij->i", source.vectors, target.vectors)
    aligned_sum = float(np.sum(aligned))
    total = float(source.vectors.sum(axis=0) @ target.vectors.sum(axis=0))
    misaligned_mean = (total - aligned_sum) / (n * n - n)
    return aligned_sum / n - misaligned_mean


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric lookup of pairwise similarity scores for a language pool."""

    languages: tuple[str, ...]
    scores: np.ndarray  # shape (L, L)
    provenance: str = ""
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {lang: i for i, lang in enumerate(self.languages)}
        )
        self._validate()

    def _validate(self) -> None:
        L = len(self.languages)
        if len(self._index) != L:
            raise InputError("duplicate language codes in similarity matrix")
        if self.scores.shape != (L, L):
            raise InputError("score table shape does not match language count")
        if not np.all(np.isfinite(self.scores)):
            raise InputError("similarity matrix contains non-finite entries")
        if np.max(np.abs(self.scores - self.scores.T)) > 1e-12:
            raise InputError("similarity matrix is not symmetric")
        # gap scores live in [-2, 2]; in practice (large aligned corpora)
        # they stay within [-1, 1], but small pools can exceed 1 slightly
        # because the misaligned mean may be negative
        if np.any(self.scores < -2.0 - 1e-12) or np.any(self.scores > 2.0 + 1e-12):
            raise InputError("similarity entries outside [-2, 2]")
        # the self-similarity of a language dominates its row
        diag = np.diag(self.scores)
        if np.any(self.scores > diag[:, None] + 1e-12):
            raise InputError("diagonal entry is not the row maximum")

    def __contains__(self, language: str) -> bool:
        return language in self._index

    def score(self, a: str, b: str) -> float:
        try:
            return float(self.scores[self._index[a], self._index[b]])
        except KeyError as exc:
            raise InputError(f"language {exc.args[0]!r} not in similarity matrix")

    def save_csv(self, path: str) -> None:
        lines = []
        if self.provenance:
            lines.append(f"# provenance: {self.provenance}")
        lines.append("," + ",".join(self.languages))
        for i, lang in enumerate(self.languages):
            row = ",".join(f"{v:.17g}" for v in self.scores[i])
            lines.append(f"{lang},{row}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    @staticmethod
    def load_csv(path: str) -> "SimilarityMatrix":
        provenance = ""
        rows = []
        with open(path, encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
        data = []
        for ln in lines:
            if ln.startswith("#"):
                if ln.startswith("# provenance:"):
                    provenance = ln[len("# provenance:"):].strip()
                continue
            data.append(ln)
        if not data:
            raise InputError(f"{path}: empty similarity CSV")
        header = data[0].split(",")
        languages = tuple(h for h in header[1:] if h)
        for ln in data[1:]:
            cells = ln.split(",")
            rows.append((cells[0], [float(c) for c in cells[1:]]))
        if tuple(r[0] for r in rows) != languages:
            raise InputError(f"{path}: row and column language order disagree")
        scores = np.array([r[1] for r in rows], dtype=np.float64)
        return SimilarityMatrix(languages, scores, provenance)


def build_similarity_matrix(
    sets: list[EmbeddingSet], provenance: str = ""
) -> SimilarityMatrix:
    """Full pairwise similarity matrix, symmetrized by averaging directed gaps.

    The diagonal holds each set's gap with itself, which by construction is
    the row maximum for well-behaved parallel corpora.
    """
    if len(sets) < 2:
        raise InputError("need at least 2 embedding sets")
    langs = [s.language for s in sets]
    if len(set(langs)) != len(langs):
        raise InputError("duplicate language codes among embedding sets")
    n0, d0 = sets[0].n, sets[0].d
    for s in sets[1:]:
        if s.n != n0:
            raise AlignmentError(
                f"corpus size mismatch: {s.language} has n={s.n}, expected {n0}"
            )
        if s.d != d0:
            raise AlignmentError(
                f"dimension mismatch: {s.language} has d={s.d}, expected {d0}"
            )
    L = len(sets)
    scores = np.zeros((L, L))
    for i in range(L):
        scores[i, i] = cosine_gap(sets[i], sets[i])
        for j in range(i + 1, L):
            g = 0.5 * (cosine_gap(sets[i], sets[j]) + cosine_gap(sets[j], sets[i]))
            scores[i, j] = g
            scores[j, i] = g
    return SimilarityMatrix(tuple(langs), scores, provenance)


def load_embedding_file(path: str) -> EmbeddingSet:
    """Parse the text embedding format: `lang n d` header then n rows of d
    floats; `#` comment lines are ignored anywhere."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 3:
        raise InputError(f"{path}: header must be 'lang n d'")
    lang = header[0]
    try:
        n, d = int(header[1]), int(header[2])
    except ValueError:
        raise InputError(f"{path}: non-integer n or d in header")
    body = lines[1:]
    if len(body) != n:
        raise InputError(f"{path}: header declares n={n} but found {len(body)} rows")
    try:
        rows = [[float(x) for x in ln.split()] for ln in body]
    except ValueError:
        raise InputError(f"{path}: non-numeric embedding value")
    if any(len(r) != d for r in rows):
        raise InputError(f"{path}: row width differs from declared d={d}")
    return EmbeddingSet.from_rows(lang, rows)


def write_embedding_file(path: str, es: EmbeddingSet, comments: list[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(f"{es.language} {es.n} {es.d}\n")
        for row in es.vectors:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_embedding_dir(directory: str) -> list[EmbeddingSet]:
    paths = sorted(
        os.path.join(directory, f)
        for f in os.listdir(directory)
        if os.path.isfile(os.path.join(directory, f))
    )
    if not paths:
        raise InputError(f"{directory}: no embedding files found")
    return [load_embedding_file(p) for p in paths]
