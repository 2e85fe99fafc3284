"""Desk-scale classification harness: normalization, folds, a one-vs-rest
logistic classifier, and the two accuracy summaries.

Everything here is deterministic: folds come from seeded permutations, and
the optimizer is full-batch gradient descent with a backtracking line
search, so identical inputs reproduce identical reports bit for bit.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import (DegenerateLabelsError, GroupingError, ParameterError,
                     ProtocolError)

log = logging.getLogger(__name__)

C_GRID = (0.001, 0.01, 0.1, 1.0, 10.0, 30.0)
C_RANGE = (0.001, 30.0)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus the per-row metadata the protocols group by."""

    X: np.ndarray
    labels: np.ndarray
    speakers: np.ndarray
    sessions: np.ndarray
    ids: np.ndarray

    def __post_init__(self):
        n = len(self.X)
        for name in ("labels", "speakers", "sessions", "ids"):
            if len(getattr(self, name)) != n:
                raise ParameterError(f"{name} length differs from X rows")

    @classmethod
    def from_feature_vectors(cls, vectors):
        def col(attr):
            return np.array([getattr(v, attr) for v in vectors], dtype=object)
        uid = [v.utterance_id if v.segment_index is None
               else f"{v.utterance_id}[{v.segment_index}]" for v in vectors]
        return cls(X=np.stack([v.values for v in vectors]).astype(np.float64),
                   labels=col("label"), speakers=col("speaker_id"),
                   sessions=col("session_id"),
                   ids=np.array(uid, dtype=object))

    def __len__(self):
        return len(self.X)


@dataclass(frozen=True)
class Fold:
    train: np.ndarray
    tune: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class FoldPlan:
    kind: str
    folds: tuple


def _group_stats(X):
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # population
    std = np.where(std == 0.0, 1.0, std)
    return mean, std


def znormalize(ds, scheme, fold=None):
    """Z-score the feature columns within the scheme's statistic groups.

    "g"  — one global group;
    "ps" — one group per speaker, statistics over all of that speaker's
           rows (protocol-faithful: applied across train/test alike);
    "pf" — statistics from the given fold's train rows only, applied to
           every row (no test leakage by construction).

    Zero-variance columns are centered and left unscaled.
    """
    X = ds.X
    if scheme == "g":
        if len(X) == 0:
            raise GroupingError("empty dataset")
        mean, std = _group_stats(X)
        out = (X - mean) / std
    elif scheme == "ps":
        out = np.empty_like(X)
        for spk in np.unique(ds.speakers.astype(str)):
            rows = np.nonzero(ds.speakers.astype(str) == spk)[0]
            if len(rows) == 0:
                raise GroupingError(f"speaker {spk!r} has no rows")
            mean, std = _group_stats(X[rows])
            out[rows] = (X[rows] - mean) / std
    elif scheme == "pf":
        if fold is None:
            raise ParameterError("per-fold normalization needs a fold")
        if len(fold.train) == 0:
            raise GroupingError("fold has an empty train split")
        mean, std = _group_stats(X[fold.train])
        out = (X - mean) / std
    else:
        raise ParameterError(f"unknown normalization scheme {scheme!r}")
    return Dataset(X=out, labels=ds.labels, speakers=ds.speakers,
                   sessions=ds.sessions, ids=ds.ids)


def _nested_split(rest, rng, tune_share=0.2):
    order = rng.permutation(len(rest))
    n_tune = max(1, int(round(tune_share * len(rest))))
    if n_tune >= len(rest):
        n_tune = len(rest) - 1
    return rest[order[n_tune:]], rest[order[:n_tune]]


def make_folds(ds, kind, k=5, seed=0, stratify=False):
    """Build the evaluation folds for one of the three protocols.

    kfold(k, seed)
        Seeded random partition into k test blocks (optionally stratified
        by label); within each fold the remaining rows are split 80/20
        into train and tune.
    leave_one_speaker_out
        One fold per speaker; the next speaker in sorted order (cyclic) is
        the tune set.  With exactly two speakers the train speaker doubles
        as the tune set.
    loso_session
        Each session must hold exactly two speakers; per session, one
        speaker is the test set and the other the tune set, then the roles
        reverse — two folds per session.  Rows outside the session train.
    """
    n = len(ds)
    labels = ds.labels.astype(str)
    if kind == "kfold":
        if n < k:
            raise ProtocolError(f"{n} rows cannot make {k} folds")
        rng = np.random.default_rng(seed)
        if stratify:
            blocks = [[] for _ in range(k)]
            pos = 0
            for lab in np.unique(labels):
                rows = np.nonzero(labels == lab)[0]
                for idx in rows[rng.permutation(len(rows))]:
                    blocks[pos % k].append(idx)
                    pos += 1
            blocks = [np.array(sorted(b), dtype=np.intp) for b in blocks]
        else:
            perm = rng.permutation(n)
            blocks = [np.sort(b) for b in np.array_split(perm, k)]
        folds = []
        for i in range(k):
            test = blocks[i]
            rest = np.setdiff1d(np.arange(n), test)
            train, tune = _nested_split(rest, rng)
            folds.append(Fold(train=np.sort(train), tune=np.sort(tune), test=test))
        return FoldPlan(kind="kfold", folds=tuple(folds))

    speakers = ds.speakers.astype(str)
    if kind == "leave_one_speaker_out":
        names = sorted(np.unique(speakers))
        if len(names) < 2:
            raise ProtocolError("speaker-independent folds need >= 2 speakers")
        rows_of = {s: np.nonzero(speakers == s)[0] for s in names}
        folds = []
        for i, s in enumerate(names):
            tune_s = names[(i + 1) % len(names)]
            test = rows_of[s]
            tune = rows_of[tune_s]
            if len(names) == 2:
                train = tune
            else:
                train = np.nonzero((speakers != s) & (speakers != tune_s))[0]
            folds.append(Fold(train=train, tune=tune, test=test))
        return FoldPlan(kind="leave_one_speaker_out", folds=tuple(folds))

    if kind == "loso_session":
        sessions = ds.sessions.astype(str)
        folds = []
        for sess in sorted(np.unique(sessions)):
            in_sess = sessions == sess
            spk = sorted(np.unique(speakers[in_sess]))
            if len(spk) != 2:
                raise ProtocolError(
                    f"session {sess!r} has {len(spk)} speakers; role reversal needs exactly 2"
                )
            train = np.nonzero(~in_sess)[0]
            if len(train) == 0:
                raise ProtocolError(f"no rows outside session {sess!r} to train on")
            a = np.nonzero(in_sess & (speakers == spk[0]))[0]
            b = np.nonzero(in_sess & (speakers == spk[1]))[0]
            folds.append(Fold(train=train, tune=b, test=a))
            folds.append(Fold(train=train, tune=a, test=b))
        return FoldPlan(kind="loso_session", folds=tuple(folds))

    raise ProtocolError(f"unknown fold kind {kind!r}")


# --- classifier -------------------------------------------------------------

@dataclass
class LogRegModel:
    classes: tuple
    weights: np.ndarray  # (n_classes, d)
    biases: np.ndarray
    C: float
    grad_norms: np.ndarray = field(default=None)
    iterations: np.ndarray = field(default=None)


def _binary_loss_grad(wb, X, t, inv_c):
    w, b = wb[:-1], wb[-1]
    z = X @ w + b
    loss = float(np.logaddexp(0.0, -t * z).sum() + 0.5 * inv_c * w @ w)
    # d/dz log(1+exp(-tz)) = -t * sigmoid(-tz)
    coef = -t * expit(-t * z)
    grad = np.empty_like(wb)
    grad[:-1] = X.T @ coef + inv_c * w
    grad[-1] = coef.sum()
    return loss, grad


def _descend(X, t, inv_c, max_iter, tol):
    wb = np.zeros(X.shape[1] + 1)
    loss, grad = _binary_loss_grad(wb, X, t, inv_c)
    step = 1.0 / max(1.0, len(X))
    it = 0
    for it in range(1, max_iter + 1):
        gnorm2 = float(grad @ grad)
        if np.sqrt(gnorm2) <= tol:
            break
        # backtracking line search with an Armijo sufficient decrease
        accepted = False
        for _ in range(60):
            cand = wb - step * grad
            new_loss, new_grad = _binary_loss_grad(cand, X, t, inv_c)
            if new_loss <= loss - 1e-4 * step * gnorm2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break  # step underflowed; gradient is numerically flat
        wb, loss, grad = cand, new_loss, new_grad
        step *= 2.0
    return wb, float(np.linalg.norm(grad)), it


def train_logreg(X, y, C=1.0, max_iter=500, tol=1e-6):
    """Fit one L2-regularized logistic separator per class (one-vs-rest).

    The penalty is 0.5/C * ||w||^2 (bias unregularized).  Optimization is
    plain full-batch descent with backtracking, so training is exactly
    reproducible; per-class final gradient norms and iteration counts are
    kept on the model.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes = tuple(sorted(map(str, set(y))))
    if len(classes) < 2:
        raise DegenerateLabelsError("training needs at least 2 distinct labels")
    if not C_RANGE[0] <= C <= C_RANGE[1]:
        log.warning("C=%g lies outside the tuned interval %s", C, C_RANGE)
    weights = np.empty((len(classes), X.shape[1]))
    biases = np.empty(len(classes))
    gnorms = np.empty(len(classes))
    iters = np.empty(len(classes), dtype=int)
    ystr = y.astype(str)
    for ci, cls in enumerate(classes):
        t = np.where(ystr == cls, 1.0, -1.0)
        wb, gnorm, it = _descend(X, t, 1.0 / C, max_iter, tol)
        weights[ci], biases[ci] = wb[:-1], wb[-1]
        gnorms[ci], iters[ci] = gnorm, it
    return LogRegModel(classes=classes, weights=weights, biases=biases,
                       C=C, grad_norms=gnorms, iterations=iters)


def predict(model, X):
    scores = np.asarray(X, dtype=np.float64) @ model.weights.T + model.biases
    return np.array([model.classes[i] for i in scores.argmax(axis=1)], dtype=object)


@dataclass(frozen=True)
class EvalResult:
    wa: float
    ua: float
    confusion: np.ndarray
    classes: tuple


def evaluate(model, X_test, y_test):
    """Weighted accuracy (overall correct rate), unweighted accuracy
    (mean per-class recall over classes present in the test set), and the
    confusion matrix with true labels on rows."""
    y_test = np.asarray(y_test).astype(str)
    if len(y_test) == 0:
        raise ParameterError("empty test set")
    pred = predict(model, X_test).astype(str)
    classes = tuple(sorted(set(model.classes) | set(y_test)))
    idx = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=int)
    for yt, yp in zip(y_test, pred):
        confusion[idx[yt], idx[yp]] += 1
    wa = float((pred == y_test).mean())
    recalls = []
    for c in sorted(set(y_test)):
        row = confusion[idx[c]]
        recalls.append(row[idx[c]] / row.sum())
    return EvalResult(wa=wa, ua=float(np.mean(recalls)),
                      confusion=confusion, classes=classes)


def grid_search_C(X_train, y_train, X_tune, y_tune, grid=C_GRID, **fit_kw):
    """Pick the cost from the grid by tune-set unweighted accuracy.

    The grid is scanned in increasing order and only strictly better
    accuracy replaces the incumbent, so ties resolve to the smaller C.
    """
    if len(grid) == 0:
        raise ParameterError("empty C grid")
    best_c, best_ua = None, -1.0
    for c in sorted(grid):
        model = train_logreg(X_train, y_train, C=c, **fit_kw)
        ua = evaluate(model, X_tune, y_tune).ua
        if ua > best_ua:
            best_c, best_ua = c, ua
    return best_c, best_ua


def run_protocol(ds, protocol, norm="g", grid=C_GRID, seed=0, k=5,
                 stratify=False, max_iter=500, tol=1e-6):
    """Run a full evaluation: folds -> normalization -> C search -> metrics.

    protocol: "sd5" (seeded 5-fold), "si" (leave-one-speaker-out), or
    "loso" (session-wise with speaker role reversal).  Per fold, the best C
    is chosen on the tune split and the final model retrains on
    train + tune rows.  Returns a plain-dict report (JSON-ready).
    """
    kind = {"sd5": "kfold", "si": "leave_one_speaker_out",
            "loso": "loso_session"}.get(protocol)
    if kind is None:
        raise ProtocolError(f"unknown protocol {protocol!r}")
    if norm not in ("g", "ps", "pf"):
        raise ParameterError(f"unknown normalization scheme {norm!r}")
    plan = make_folds(ds, kind, k=k, seed=seed, stratify=stratify)

    if norm in ("g", "ps"):
        normed = znormalize(ds, norm)
    folds_out = []
    for fi, fold in enumerate(plan.folds):
        if norm == "pf":
            normed = znormalize(ds, "pf", fold=fold)
        X, y = normed.X, normed.labels.astype(str)
        best_c, _ = grid_search_C(X[fold.train], y[fold.train],
                                  X[fold.tune], y[fold.tune],
                                  grid=grid, max_iter=max_iter, tol=tol)
        final_rows = np.union1d(fold.train, fold.tune)
        model = train_logreg(X[final_rows], y[final_rows], C=best_c,
                             max_iter=max_iter, tol=tol)
        res = evaluate(model, X[fold.test], y[fold.test])
        folds_out.append({
            "fold": fi,
            "n_train": int(len(fold.train)),
            "n_tune": int(len(fold.tune)),
            "n_test": int(len(fold.test)),
            "best_c": best_c,
            "wa": res.wa,
            "ua": res.ua,
            "classes": list(res.classes),
            "confusion": res.confusion.tolist(),
        })
    return {
        "protocol": protocol,
        "normalization": norm,
        "grid": list(grid),
        "seed": seed,
        "folds": folds_out,
        "mean_wa": float(np.mean([f["wa"] for f in folds_out])),
        "mean_ua": float(np.mean([f["ua"] for f in folds_out])),
    }
