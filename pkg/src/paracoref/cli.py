"""Command-line pipeline driver.

Subcommands cover the full flow: ``ingest`` (validate + canonicalize a
corpus), ``labels`` (distant supervision), ``features`` (17-slot design
matrix), ``train``/``rank``/``evaluate``/``significance`` (the ranking
side), ``coverage``, and ``train-scorer``/``cluster``/``score-coref``/
``diff-errors`` (the clustering side).

Every subcommand resolves its options as: command-line flag, else the
``[subcommand]`` table of the ``--config`` TOML file, else a top-level
config key, else the built-in default.  Every artifact write also emits
``<artifact>.manifest.json`` recording the command, the fully resolved
options, and SHA-256 hashes of all inputs — no timestamps, so repeated
runs with identical inputs are byte-identical, manifests included.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from . import forest as forest_mod
from .coref_decisions import decide_all, load_decisions
from .coref_metrics import (Clustering, coverage, diff_errors,
                            read_clustering_conll, read_clustering_jsonl,
                            resource_lemma_pairs, score_all,
                            write_clustering_jsonl)
from .corpus import CorpusError, load_corpus, save_corpus
from .entity_coverage import DEFAULT_THRESHOLD, load_nec_labels, tune_threshold
from .evaluation import (METRICS, ap_score, classification_metrics,
                         paired_significance, precision_at_k_curve, rank_items,
                         tune_score_threshold)
from .features import (build_dataset, feature_table, load_dataset,
                       load_feature_table, save_dataset, save_feature_table,
                       slot_index)
from .forest import (DEFAULT_HYPERPARAMS, ForestHyperparams, load_forest,
                     randomized_search, save_forest)
from .graph_features import build_global_graph, write_edge_list
from .pair_scorer import (ScorerConfig, cluster_topics, load_mentions,
                          load_params, make_pair_input, save_params,
                          train_scorer)
from .rng import SplitMix64
from .supervision import (assign_splits, crowd_labels, derive_labels,
                          load_annotations, load_judgments, load_labels,
                          save_labels)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _hash_input(path: Path) -> str | dict[str, str]:
    if path.is_dir():
        return {p.name: _sha256(p) for p in sorted(path.iterdir())
                if p.is_file()}
    return _sha256(path)


def write_manifest(anchor: Path, command: str, options: Mapping[str, Any],
                   inputs: Sequence[str | Path],
                   outputs: Sequence[str | Path]) -> Path:
    """Write ``<anchor>.manifest.json`` (or ``manifest.json`` inside a
    directory anchor).  Inputs are hashed; paths recorded as given."""
    manifest = {
        "command": command,
        "options": {k: options[k] for k in sorted(options)},
        "inputs": {str(p): _hash_input(Path(p)) for p in inputs},
        "outputs": sorted(str(p) for p in outputs),
    }
    target = (anchor / "manifest.json" if anchor.is_dir()
              else anchor.with_name(anchor.name + ".manifest.json"))
    with target.open("w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return target


def _write_json(payload: Mapping[str, Any], path: Path) -> None:
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as fh:
        return tomllib.load(fh)


class Options:
    """Flag > ``[section]`` config table > top-level config > default."""

    def __init__(self, args: argparse.Namespace, config: Mapping[str, Any],
                 section: str):
        self._args = vars(args)
        self._config = config
        self._section = config.get(section, {})
        self.resolved: dict[str, Any] = {}

    def get(self, name: str, default: Any = None) -> Any:
        key = name.replace("-", "_")
        value = self._args.get(key)
        if value is None:
            value = self._section.get(name, self._section.get(key))
        if value is None:
            value = self._config.get(name, self._config.get(key))
        if value is None:
            value = default
        self.resolved[key] = value
        return value

    def require(self, name: str) -> Any:
        value = self.get(name)
        if value is None:
            raise SystemExit(f"error: missing required option --{name}")
        return value


def _load_ranking(path: Path) -> list[tuple[str, float, int, float]]:
    """Read ranking.csv rows (entry_id, score, label, n_support)."""
    expected = ("entry_id", "score", "label", "n_support")
    rows: list[tuple[str, float, int, float]] = []
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != expected:
            raise ValueError(f"{path}: unexpected header {header!r}; "
                             f"expected {expected!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ValueError(f"{path}:{line_no}: expected 4 columns")
            rows.append((row[0], float(row[1]), int(row[2]), float(row[3])))
    return rows


def _resolve_decisions(opts: Options, corpus):
    decisions_path = opts.get("decisions")
    use_lexical = opts.get("lexical-decider", False)
    if decisions_path and use_lexical:
        raise SystemExit("error: --decisions and --lexical-decider conflict")
    if decisions_path:
        return load_decisions(decisions_path), [decisions_path]
    if use_lexical:
        return decide_all(corpus), []
    return {}, []


def _resolve_nec_threshold(opts: Options, corpus) -> tuple[float, list]:
    nec_labels_path = opts.get("nec-labels")
    if nec_labels_path:
        threshold = tune_threshold(load_nec_labels(nec_labels_path), corpus)
        print(f"nec threshold tuned on {nec_labels_path}: {threshold}")
        return threshold, [nec_labels_path]
    return float(opts.get("nec-threshold", DEFAULT_THRESHOLD)), []


# --- subcommands -----------------------------------------------------------------


def _cmd_ingest(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "ingest")
    corpus_dir = Path(opts.require("corpus"))
    out_dir = Path(opts.require("out"))
    corpus = load_corpus(corpus_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out_dir)
    write_manifest(out_dir, "ingest", opts.resolved, [corpus_dir],
                   [out_dir / name for name in
                    ("tweets.jsonl", "pairs.jsonl", "meta.json")])
    print(f"ingested {len(corpus)} entries, {len(corpus.tweets)} tweets "
          f"-> {out_dir}")
    return 0


def _cmd_labels(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "labels")
    corpus_dir = Path(opts.require("corpus"))
    annotations_path = Path(opts.require("annotations"))
    out_path = Path(opts.require("out"))
    seed = int(opts.get("seed", 0))
    corpus = load_corpus(corpus_dir)
    annotations = load_annotations(annotations_path)
    labels = derive_labels(annotations, corpus)
    sources = {entry_id: "distant" for entry_id in labels}
    inputs: list[Path | str] = [corpus_dir, annotations_path]

    judgments_path = opts.get("judgments")
    if judgments_path:
        judged = crowd_labels(load_judgments(judgments_path))
        unknown = set(judged) - {e.id for e in corpus.entries}
        if unknown:
            raise SystemExit(f"error: judgments reference unknown entries: "
                             f"{sorted(unknown)[:5]}")
        labels.update(judged)
        sources.update({entry_id: "crowd" for entry_id in judged})
        inputs.append(judgments_path)

    splits_path = opts.get("splits")
    if splits_path:
        splits: dict[str, str] = {}
        with open(splits_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = tuple(next(reader, ()))
            if header != ("entry_id", "split"):
                raise SystemExit(f"error: {splits_path}: expected header "
                                 f"entry_id,split")
            for row in reader:
                splits[row[0]] = row[1]
        inputs.append(splits_path)
    else:
        fractions_spec = opts.get("split-fractions",
                                  "train=0.7,dev=0.1,test=0.2")
        fractions = {}
        for part in str(fractions_spec).split(","):
            name, _, value = part.partition("=")
            fractions[name.strip()] = float(value)
        splits = assign_splits(labels, fractions, seed)

    save_labels(labels, splits, sources, out_path)
    write_manifest(out_path, "labels", opts.resolved, inputs, [out_path])
    n_pos = sum(labels.values())
    print(f"labels: {len(labels)} entries ({n_pos} positive) -> {out_path}")
    return 0


def _cmd_features(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "features")
    corpus_dir = Path(opts.require("corpus"))
    labels_path = Path(opts.require("labels"))
    out_path = Path(opts.require("out"))
    min_support = int(opts.get("min-support", 3))
    corpus = load_corpus(corpus_dir)
    labels, splits = load_labels(labels_path)
    threshold, nec_inputs = _resolve_nec_threshold(opts, corpus)
    decisions, decision_inputs = _resolve_decisions(opts, corpus)
    graph = build_global_graph(corpus)
    dataset = build_dataset(corpus, labels, threshold, decisions, graph,
                            splits=splits, min_support=min_support)
    save_dataset(dataset, out_path)
    outputs: list[Path | str] = [out_path]

    table_path = opts.get("feature-table-out")
    if table_path:
        save_feature_table(
            feature_table(corpus, threshold, decisions, graph), table_path)
        outputs.append(table_path)
    dump_path = opts.get("graph-dump")
    if dump_path:
        write_edge_list(graph, dump_path)
        outputs.append(dump_path)

    write_manifest(out_path, "features", opts.resolved,
                   [corpus_dir, labels_path, *nec_inputs, *decision_inputs],
                   outputs)
    print(f"features: {len(dataset)} rows x 17 (threshold {threshold}, "
          f"min support {min_support}) -> {out_path}")
    return 0


def _hyperparams_from(opts: Options, seed: int) -> ForestHyperparams:
    return ForestHyperparams(
        n_estimators=int(opts.get("n-estimators",
                                  DEFAULT_HYPERPARAMS.n_estimators)),
        max_depth=int(opts.get("max-depth", DEFAULT_HYPERPARAMS.max_depth)),
        min_samples_leaf=int(opts.get("min-samples-leaf",
                                      DEFAULT_HYPERPARAMS.min_samples_leaf)),
        min_samples_split=int(opts.get("min-samples-split",
                                       DEFAULT_HYPERPARAMS.min_samples_split)),
        features_per_split=int(opts.get("features-per-split",
                                        DEFAULT_HYPERPARAMS.features_per_split)),
        seed=seed,
    )


def _cmd_train(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "train")
    dataset_path = Path(opts.require("dataset"))
    out_path = Path(opts.require("out"))
    seed = int(opts.get("seed", 0))
    split = str(opts.get("split", "train"))
    dataset = load_dataset(dataset_path).subset(split)
    if len(dataset) == 0:
        raise SystemExit(f"error: no rows in split {split!r}")
    search_iters = opts.get("search")
    if search_iters:
        hp = randomized_search(dataset.X, dataset.y,
                               n_iter=int(search_iters),
                               folds=int(opts.get("folds", 3)), seed=seed)
        print(f"search selected: {hp}")
    else:
        hp = _hyperparams_from(opts, seed)
    model = forest_mod.train(dataset.X, dataset.y, hp)
    save_forest(model, out_path)
    write_manifest(out_path, "train", opts.resolved, [dataset_path],
                   [out_path])
    print(f"forest: {hp.n_estimators} trees on {len(dataset)} rows "
          f"-> {out_path}")
    return 0


def _cmd_rank(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "rank")
    dataset_path = Path(opts.require("dataset"))
    out_path = Path(opts.require("out"))
    split = str(opts.get("split", "test"))
    use_heuristic = bool(opts.get("heuristic", False))
    inputs: list[Path | str] = [dataset_path]
    dataset = load_dataset(dataset_path).subset(split)
    if len(dataset) == 0:
        raise SystemExit(f"error: no rows in split {split!r}")
    if use_heuristic:
        scores = dataset.X[:, slot_index("heuristic_score")]
    else:
        forest_path = Path(opts.require("forest"))
        inputs.append(forest_path)
        model = load_forest(forest_path)
        scores = forest_mod.predict_proba(model, dataset.X)
    n_support = dataset.X[:, slot_index("support_pair_count")]
    ranked = rank_items(dataset.entry_ids, scores.tolist(), dataset.y.tolist())
    support = {entry_id: n_support[i]
               for i, entry_id in enumerate(dataset.entry_ids)}
    with out_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("entry_id", "score", "label", "n_support"))
        for item in ranked:
            writer.writerow((item.id, repr(item.score), item.label,
                             repr(float(support[item.id]))))
    write_manifest(out_path, "rank", opts.resolved, inputs, [out_path])
    print(f"ranked {len(ranked)} {split} rows "
          f"({'heuristic' if use_heuristic else 'forest'}) -> {out_path}")
    return 0


def _cmd_evaluate(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "evaluate")
    ranking_path = Path(opts.require("ranking"))
    out_path = Path(opts.require("out"))
    seed = int(opts.get("seed", 0))
    rows = _load_ranking(ranking_path)
    inputs: list[Path | str] = [ranking_path]

    subset = rows
    min_support = opts.get("min-support")
    if min_support is not None:
        subset = [r for r in subset if r[3] >= float(min_support)]
    sample = opts.get("sample")
    if sample is not None and int(sample) < len(subset):
        ordered = sorted(subset, key=lambda r: r[0])
        rng = SplitMix64(seed)
        picked = rng.sample_indices(len(ordered), int(sample))
        subset = [ordered[i] for i in sorted(picked)]
    if not subset:
        raise SystemExit("error: ranking subset is empty")

    report: dict[str, Any] = {
        "n": len(subset),
        "n_positive": int(sum(r[2] for r in subset)),
        "ap": ap_score([r[1] for r in subset], [r[2] for r in subset],
                       ids=[r[0] for r in subset]),
        "subset": {
            "min_support": None if min_support is None else float(min_support),
            "sample": None if sample is None else int(sample),
            "seed": seed,
        },
    }

    train_ranking = opts.get("train-ranking")
    if train_ranking:
        train_rows = _load_ranking(Path(train_ranking))
        inputs.append(train_ranking)
        threshold = tune_score_threshold([r[1] for r in train_rows],
                                         [r[2] for r in train_rows])
        gold = [r[2] for r in rows]
        predicted = [int(r[1] >= threshold) for r in rows]
        metrics = classification_metrics(gold, predicted)
        report.update({
            "threshold": threshold,
            "accuracy": metrics.accuracy,
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f1": metrics.f1,
        })

    outputs: list[Path | str] = [out_path]
    curve_path = opts.get("curve")
    if curve_path:
        ranked = rank_items([r[0] for r in subset], [r[1] for r in subset],
                            [r[2] for r in subset])
        with open(curve_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("k", "precision"))
            for k, precision in precision_at_k_curve(ranked):
                writer.writerow((k, repr(precision)))
        outputs.append(curve_path)

    _write_json(report, out_path)
    write_manifest(out_path, "evaluate", opts.resolved, inputs, outputs)
    print(f"evaluate: AP {report['ap']:.4f} on {report['n']} rows "
          f"-> {out_path}")
    return 0


def _cmd_significance(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "significance")
    path_a = Path(opts.require("ranking-a"))
    path_b = Path(opts.require("ranking-b"))
    out_path = Path(opts.require("out"))
    metric = str(opts.get("metric", "ap"))
    if metric not in METRICS:
        raise SystemExit(f"error: unknown metric {metric!r}; "
                         f"choose from {sorted(METRICS)}")
    n_resamples = int(opts.get("n-resamples", 10_000))
    seed = int(opts.get("seed", 0))
    jobs = opts.get("jobs")
    rows_a = {r[0]: r for r in _load_ranking(path_a)}
    rows_b = {r[0]: r for r in _load_ranking(path_b)}
    if set(rows_a) != set(rows_b):
        raise SystemExit("error: rankings cover different entry ids")
    ids = sorted(rows_a)
    labels = [rows_a[i][2] for i in ids]
    if any(rows_b[i][2] != y for i, y in zip(ids, labels)):
        raise SystemExit("error: rankings disagree on gold labels")
    result = paired_significance(
        [rows_a[i][1] for i in ids], [rows_b[i][1] for i in ids], labels,
        metric=metric, n_resamples=n_resamples, seed=seed,
        jobs=None if jobs is None else int(jobs))
    _write_json({
        "metric": metric,
        "n": len(ids),
        "observed_diff": result.observed_diff,
        "bootstrap_p": result.bootstrap_p,
        "permutation_p": result.permutation_p,
        "n_resamples": n_resamples,
        "seed": seed,
    }, out_path)
    write_manifest(out_path, "significance", opts.resolved, [path_a, path_b],
                   [out_path])
    print(f"significance({metric}): diff {result.observed_diff:+.4f}, "
          f"bootstrap p {result.bootstrap_p:.4g}, "
          f"permutation p {result.permutation_p:.4g} -> {out_path}")
    return 0


def _cmd_coverage(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "coverage")
    corpus_dir = Path(opts.require("corpus"))
    gold_path = Path(opts.require("gold"))
    mentions_path = Path(opts.require("mentions"))
    out_path = Path(opts.require("out"))
    verbal_only = bool(opts.get("verbal-only", False))
    corpus = load_corpus(corpus_dir)
    gold = read_clustering_jsonl(gold_path)
    mentions = load_mentions(mentions_path)
    lemmas = {m.id: m.lemma for m in mentions}
    verbal = {m.id: m.verbal for m in mentions}
    report = coverage(gold, lemmas, resource_lemma_pairs(corpus),
                      verbal=verbal, verbal_only=verbal_only)
    _write_json({
        "covered": report.covered,
        "total": report.total,
        "percent": report.percent,
        "verbal_only": verbal_only,
    }, out_path)
    write_manifest(out_path, "coverage", opts.resolved,
                   [corpus_dir, gold_path, mentions_path], [out_path])
    print(f"coverage: {report.covered}/{report.total} "
          f"({report.percent:.1f}%) -> {out_path}")
    return 0


def _scorer_config_from(opts: Options, seed: int) -> ScorerConfig:
    return ScorerConfig(
        mention_dim=int(opts.get("mention-dim", 1024)),
        binary_dim=int(opts.get("binary-dim", 2)),
        component_hidden=int(opts.get("component-hidden", 50)),
        component_out=int(opts.get("component-out", 50)),
        hidden=int(opts.get("hidden", 50)),
        use_component=not bool(opts.get("no-component", False)),
        learning_rate=float(opts.get("learning-rate", 0.1)),
        epochs=int(opts.get("epochs", 200)),
        seed=seed,
    )


def _labeled_pairs(mentions, gold: Clustering, lookup):
    by_topic: dict[str, list] = {}
    for m in mentions:
        by_topic.setdefault(m.topic, []).append(m)
    pairs = []
    labels = []
    for topic in sorted(by_topic):
        group = sorted(by_topic[topic], key=lambda m: m.id)
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                pairs.append(make_pair_input(group[i], group[j], lookup))
                labels.append(int(gold.same_cluster(group[i].id, group[j].id)))
    return pairs, labels


def _cmd_train_scorer(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "train-scorer")
    mentions_path = Path(opts.require("mentions"))
    gold_path = Path(opts.require("gold"))
    out_path = Path(opts.require("out"))
    seed = int(opts.get("seed", 0))
    scorer_config = _scorer_config_from(opts, seed)
    mentions = load_mentions(mentions_path)
    gold = read_clustering_jsonl(gold_path)
    inputs: list[Path | str] = [mentions_path, gold_path]
    lookup = None
    table_path = opts.get("feature-table")
    if table_path and scorer_config.use_component:
        table = load_feature_table(table_path)
        lookup = lambda a, b: table.get(frozenset((a.casefold(), b.casefold())))
        inputs.append(table_path)
    pairs, labels = _labeled_pairs(mentions, gold, lookup)
    result = train_scorer(pairs, labels, scorer_config)
    save_params(result.params, scorer_config, out_path)
    write_manifest(out_path, "train-scorer", opts.resolved, inputs, [out_path])
    print(f"scorer: {len(pairs)} pairs, final loss {result.losses[-1]:.4f} "
          f"-> {out_path}")
    return 0


def _cmd_cluster(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "cluster")
    mentions_path = Path(opts.require("mentions"))
    scorer_path = Path(opts.require("scorer"))
    out_path = Path(opts.require("out"))
    merge_threshold = float(opts.get("threshold", 0.5))
    mentions = load_mentions(mentions_path)
    params, scorer_config = load_params(scorer_path)
    inputs: list[Path | str] = [mentions_path, scorer_path]
    lookup = None
    table_path = opts.get("feature-table")
    if table_path and scorer_config.use_component:
        table = load_feature_table(table_path)
        lookup = lambda a, b: table.get(frozenset((a.casefold(), b.casefold())))
        inputs.append(table_path)
    clustering = cluster_topics(mentions, params, scorer_config,
                                merge_threshold, feature_lookup=lookup)
    write_clustering_jsonl(clustering, out_path)
    write_manifest(out_path, "cluster", opts.resolved, inputs, [out_path])
    print(f"cluster: {len(mentions)} mentions -> {len(clustering)} clusters "
          f"-> {out_path}")
    return 0


def _read_clustering(path: Path, fmt: str) -> Clustering:
    if fmt == "jsonl":
        return read_clustering_jsonl(path)
    if fmt == "conll":
        return read_clustering_conll(path)
    raise SystemExit(f"error: unknown clustering format {fmt!r}")


def _cmd_score_coref(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "score-coref")
    gold_path = Path(opts.require("gold"))
    sys_path = Path(opts.require("sys"))
    out_path = Path(opts.require("out"))
    fmt = str(opts.get("format", "jsonl"))
    gold = _read_clustering(gold_path, fmt)
    system = _read_clustering(sys_path, fmt)
    report = score_all(gold, system)
    _write_json(report.as_dict(), out_path)
    write_manifest(out_path, "score-coref", opts.resolved,
                   [gold_path, sys_path], [out_path])
    print(f"score-coref: CoNLL F1 {report.conll_f1:.4f} -> {out_path}")
    return 0


def _cmd_diff_errors(args: argparse.Namespace, config: dict) -> int:
    opts = Options(args, config, "diff-errors")
    gold_path = Path(opts.require("gold"))
    baseline_path = Path(opts.require("baseline"))
    new_path = Path(opts.require("new"))
    out_prefix = Path(opts.require("out-prefix"))
    fmt = str(opts.get("format", "jsonl"))
    gold = _read_clustering(gold_path, fmt)
    baseline = _read_clustering(baseline_path, fmt)
    new = _read_clustering(new_path, fmt)
    fp, fn = diff_errors(gold, baseline, new)
    outputs = []
    for name, pair_list in (("fp_recovered", fp), ("fn_recovered", fn)):
        target = out_prefix.with_name(out_prefix.name + f".{name}.csv")
        with target.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("mention_a", "mention_b"))
            writer.writerows(pair_list)
        outputs.append(target)
    anchor = outputs[0]
    write_manifest(anchor, "diff-errors", opts.resolved,
                   [gold_path, baseline_path, new_path], outputs)
    print(f"diff-errors: {len(fp)} false positives recovered, "
          f"{len(fn)} false negatives recovered -> {out_prefix}.*.csv")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "labels": _cmd_labels,
    "features": _cmd_features,
    "train": _cmd_train,
    "rank": _cmd_rank,
    "evaluate": _cmd_evaluate,
    "significance": _cmd_significance,
    "coverage": _cmd_coverage,
    "train-scorer": _cmd_train_scorer,
    "cluster": _cmd_cluster,
    "score-coref": _cmd_score_coref,
    "diff-errors": _cmd_diff_errors,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paracoref",
        description="Predicate-paraphrase re-scoring and event-coreference "
                    "integration pipeline.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--seed", type=int, help="global seed")
    parser.add_argument("--jobs", type=int, help="worker processes where supported")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *specs: tuple) -> None:
        p = sub.add_parser(name, help=help_text)
        for flag, kwargs in specs:
            p.add_argument(flag, **kwargs)

    arg = lambda flag, **kw: (flag, kw)
    add("ingest", "validate a corpus directory and write canonical form",
        arg("--corpus"), arg("--out"))
    add("labels", "derive distant labels (and crowd overrides) + splits",
        arg("--corpus"), arg("--annotations"), arg("--judgments"),
        arg("--splits"), arg("--split-fractions"), arg("--out"))
    add("features", "assemble the 17-column design matrix CSV",
        arg("--corpus"), arg("--labels"), arg("--decisions"),
        arg("--lexical-decider", action="store_true", default=None),
        arg("--nec-labels"), arg("--nec-threshold", type=float),
        arg("--min-support", type=int), arg("--feature-table-out"),
        arg("--graph-dump"), arg("--out"))
    add("train", "train the random forest (optionally after CV search)",
        arg("--dataset"), arg("--split"), arg("--search", type=int),
        arg("--folds", type=int), arg("--n-estimators", type=int),
        arg("--max-depth", type=int), arg("--min-samples-leaf", type=int),
        arg("--min-samples-split", type=int),
        arg("--features-per-split", type=int), arg("--out"))
    add("rank", "score a split and write the ranking CSV",
        arg("--dataset"), arg("--forest"), arg("--split"),
        arg("--heuristic", action="store_true", default=None), arg("--out"))
    add("evaluate", "AP (optionally on a filtered/sampled subset) and "
        "threshold metrics",
        arg("--ranking"), arg("--train-ranking"),
        arg("--min-support", type=float), arg("--sample", type=int),
        arg("--curve"), arg("--out"))
    add("significance", "paired bootstrap/permutation tests on two rankings",
        arg("--ranking-a"), arg("--ranking-b"), arg("--metric"),
        arg("--n-resamples", type=int), arg("--out"))
    add("coverage", "resource coverage of gold coreferring pairs",
        arg("--corpus"), arg("--gold"), arg("--mentions"),
        arg("--verbal-only", action="store_true", default=None), arg("--out"))
    add("train-scorer", "train the pairwise mention scorer",
        arg("--mentions"), arg("--gold"), arg("--feature-table"),
        arg("--mention-dim", type=int), arg("--binary-dim", type=int),
        arg("--component-hidden", type=int), arg("--component-out", type=int),
        arg("--hidden", type=int),
        arg("--no-component", action="store_true", default=None),
        arg("--learning-rate", type=float), arg("--epochs", type=int),
        arg("--out"))
    add("cluster", "agglomerative clustering with a trained scorer",
        arg("--mentions"), arg("--scorer"), arg("--feature-table"),
        arg("--threshold", type=float), arg("--out"))
    add("score-coref", "MUC/B-cubed/CEAF-e/CoNLL report for two clusterings",
        arg("--gold"), arg("--sys"), arg("--format"), arg("--out"))
    add("diff-errors", "pairwise links fixed by a new system vs a baseline",
        arg("--gold"), arg("--baseline"), arg("--new"), arg("--format"),
        arg("--out-prefix"))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except SystemExit:
        raise
    except (CorpusError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
