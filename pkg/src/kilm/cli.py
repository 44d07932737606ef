"""Command-line front end: ingest -> compile -> prompt -> rank -> eval.

Every subcommand validates its configuration up front, writes a
run_manifest.json capturing the effective config and input hashes, logs
to stderr only, and uses distinct exit codes per failure class.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import re
import shlex
import sys
from pathlib import Path

from . import __version__
from .articles import parse_article
from .compile import CompileConfig, CompileReport, TrainingSample, compile_corpus
from .dump import parse_dump
from .ed_convert import convert_benchmark_record
from .errors import ConfigError, KilmError, MetricUndefinedError, ScorerError
from .jsonl import dump_line, read_jsonl, write_jsonl
from .knowledge import KnowledgeTable, build_knowledge_table
from .metrics import EDResult, GenResult, exact_match, inkb_micro_f1, min_frequency_filter, unigram_f1
from .prompts import (
    ClozeInstance,
    EDInstance,
    Prompt,
    QAExemplar,
    build_appositive_prompt,
    build_desc_probe,
    build_ed_prompts,
    build_lama_cloze,
    build_qa_prompt,
)
from .scoring import (
    CandidateScore,
    NGramScorer,
    SubprocessScorer,
    ngram_train,
    pick_winner,
    request_from_prompt,
)
from .scoring.ranking import RANKING_MODES
from .slicing import DocumentSlice, MentionSpan, slice_documents
from .stats import CorpusStats, corpus_stats
from .tfidf import TfidfIndex

log = logging.getLogger("kilm")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING_FILE = 3
EXIT_BAD_CONFIG = 4
EXIT_SCORER = 5

ARTICLES_FILE = "articles.jsonl"
TABLE_FILE = "knowledge_table.jsonl"
SLICES_FILE = "slices.jsonl"
STATS_FILE = "stats.json"
TRAIN_FILE = "train.jsonl"
MANIFEST_FILE = "run_manifest.json"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, subcommand: str, config: dict, inputs: list[Path]) -> None:
    manifest = {
        "tool": "kilm",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in sorted(inputs)},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / MANIFEST_FILE, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=False)
        fh.write("\n")


def _require(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return path


def _load_table(corpus_dir: Path) -> KnowledgeTable:
    return KnowledgeTable.from_rows(read_jsonl(_require(corpus_dir / TABLE_FILE)))


def _load_slices(corpus_dir: Path):
    for row in read_jsonl(_require(corpus_dir / SLICES_FILE)):
        yield DocumentSlice.from_dict(row)


# ---------------------------------------------------------------- ingest

def _parse_page_or_error(page):
    try:
        return parse_article(page)
    except KilmError as exc:
        return f"{page.title}: {exc}"


def cmd_ingest(args) -> int:
    dump_path = _require(Path(args.dump))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    skip_re = re.compile(args.skip_title_regex) if args.skip_title_regex else None

    log.info("pass 1/2: collecting redirects")
    redirects: dict[str, str] = {}
    page_count = 0
    for page in parse_dump(dump_path):
        page_count += 1
        if page.is_redirect and page.redirect_target:
            redirects[page.title] = page.redirect_target
    log.info("%d pages, %d redirects", page_count, len(redirects))

    log.info("pass 2/2: parsing articles, slicing at stride %d (%s mode)", args.stride, args.mode)
    table = KnowledgeTable(redirects=dict(redirects))
    parse_failures = 0
    slice_rows = 0

    def pages():
        for page in parse_dump(dump_path):
            if page.is_redirect:
                continue
            if skip_re and skip_re.search(page.title):
                continue
            yield page

    def articles():
        # ordered map keeps output in document order for any worker count
        nonlocal parse_failures
        if args.jobs > 1:
            import multiprocessing

            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(args.jobs) as pool:
                produced = pool.imap(_parse_page_or_error, pages(), chunksize=16)
                for result in produced:
                    if isinstance(result, str):
                        parse_failures += 1
                        log.warning("skipping page: %s", result)
                    else:
                        yield result
            return
        for page in pages():
            try:
                yield parse_article(page)
            except KilmError as exc:
                parse_failures += 1
                log.warning("skipping page: %s", exc)

    with open(out_dir / ARTICLES_FILE, "w", encoding="utf-8", newline="\n") as art_fh, open(
        out_dir / SLICES_FILE, "w", encoding="utf-8", newline="\n"
    ) as slice_fh:
        for article in articles():
            art_fh.write(dump_line(article.to_dict()) + "\n")
            if article.short_description:
                table.add(article.title, article.short_description, article.desc_source)
            else:
                table.skipped += 1
            for sl in slice_documents(article, stride=args.stride, mode=args.mode):
                sl.mentions = [
                    dataclasses.replace(m, entity=table.resolve(m.entity)) for m in sl.mentions
                ]
                slice_fh.write(dump_line(sl.to_dict()) + "\n")
                slice_rows += 1

    write_jsonl(out_dir / TABLE_FILE, table.iter_rows())
    stats = corpus_stats(_load_slices(out_dir), table, stride=args.stride)
    with open(out_dir / STATS_FILE, "w", encoding="utf-8") as fh:
        json.dump(stats.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    write_manifest(
        out_dir,
        "ingest",
        {
            "dump": str(dump_path),
            "stride": args.stride,
            "mode": args.mode,
            "skip_title_regex": args.skip_title_regex,
        },
        [dump_path],
    )
    log.info(
        "wrote %d slices, %d table entries (%d conflicts, %d without description, %d parse failures)",
        slice_rows, len(table), table.conflicts, table.skipped, parse_failures,
    )
    return EXIT_OK


# ---------------------------------------------------------------- compile

_CONFIG_KEYS = (
    "variant", "seed", "epochs", "mask_prob", "poisson_lambda", "stride",
    "max_len_with_knowledge",
)


def _load_config(args) -> CompileConfig:
    values: dict = {}
    if args.config:
        path = _require(Path(args.config))
        if path.suffix == ".toml":
            try:
                import tomllib
            except ImportError as exc:  # tomllib needs python >= 3.11
                raise ConfigError("TOML config requires Python 3.11+; use JSON") from exc
            with open(path, "rb") as fh:
                loaded = tomllib.load(fh)
        else:
            with open(path, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        unknown = set(loaded) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    try:
        return CompileConfig(**values).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_compile(args) -> int:
    corpus_dir = _require(Path(args.corpus))
    out_dir = Path(args.out)
    config = _load_config(args)
    table = _load_table(corpus_dir)
    slices = list(_load_slices(corpus_dir))
    samples, report = compile_corpus(slices, table, config, jobs=args.jobs)
    write_jsonl(out_dir / TRAIN_FILE, (s.to_dict() for s in samples))
    write_manifest(
        out_dir,
        "compile",
        {**dataclasses.asdict(config), "jobs": args.jobs, "corpus": str(corpus_dir)},
        [corpus_dir / TABLE_FILE, corpus_dir / SLICES_FILE],
    )
    log.info(
        "emitted %d samples (%d plain, %d skipped) to %s",
        report.emitted, report.plain, report.skipped, out_dir / TRAIN_FILE,
    )
    return EXIT_OK


# ---------------------------------------------------------------- prompt

def _qa_records(path: Path):
    for row in read_jsonl(path):
        answers = row.get("answers") or ([row["answer"]] if "answer" in row else [])
        if not answers:
            continue
        yield row["question"], [str(a) for a in answers]


def _make_scorer(args):
    command = getattr(args, "scorer", None) or os.environ.get("KILM_SCORER")
    ngram_corpus = getattr(args, "ngram_corpus", None)
    if command:
        return SubprocessScorer(
            shlex.split(command),
            max_inflight=getattr(args, "max_inflight", 32),
            timeout=getattr(args, "timeout", 120.0),
        )
    if ngram_corpus:
        tokens = _require(Path(ngram_corpus)).read_text(encoding="utf-8").split()
        model = ngram_train(tokens, order=args.ngram_order, delta=args.ngram_delta)
        return NGramScorer(model)
    raise ConfigError("no scorer: pass --scorer, --ngram-corpus, or set KILM_SCORER")


def cmd_prompt(args) -> int:
    out_path = Path(args.out)
    prompts: list[Prompt] = []
    inputs: list[Path] = []
    filtered = 0

    if args.task == "ed":
        src = _require(Path(args.input))
        inputs.append(src)
        rows = read_jsonl(src)
        if args.format == "benchmark":
            if not args.table:
                raise ConfigError("--format benchmark needs --table for candidate descriptions")
            table = KnowledgeTable.from_rows(read_jsonl(_require(Path(args.table))))
            converted = []
            for row in rows:
                instance = convert_benchmark_record(row, table)
                if instance is None:
                    filtered += 1
                else:
                    converted.append(instance)
            rows = converted
        for i, row in enumerate(rows):
            inst = EDInstance.from_dict(row, instance_id=row.get("instance_id") or f"ed{i:06d}")
            prompts.extend(build_ed_prompts(inst, window=args.window))
    elif args.task == "appositive":
        src = _require(Path(args.input))
        inputs.append(src)
        for i, row in enumerate(read_jsonl(src)):
            mention = row["mention"]
            prompts.append(
                build_appositive_prompt(
                    row["context"],
                    (mention["start"], mention["end"]),
                    instance_id=row.get("instance_id") or f"ap{i:06d}",
                    window=args.window,
                    golds=row.get("golds") or [],
                )
            )
    elif args.task == "qa":
        pool_path = _require(Path(args.pool))
        q_path = _require(Path(args.questions))
        inputs += [pool_path, q_path]
        pool = [QAExemplar(q, answers[0]) for q, answers in _qa_records(pool_path)]
        index = TfidfIndex(pool)
        for i, (question, answers) in enumerate(_qa_records(q_path)):
            exemplars = list(reversed(index.retrieve(question, args.shots)))
            prompts.append(
                build_qa_prompt(question, exemplars, instance_id=f"qa{i:06d}", golds=answers)
            )
    elif args.task == "probe":
        corpus_dir = _require(Path(args.corpus))
        inputs += [corpus_dir / SLICES_FILE, corpus_dir / TABLE_FILE]
        table = _load_table(corpus_dir)
        count = 0
        for sl in _load_slices(corpus_dir):
            for mention in sl.mentions:
                if mention.entity not in table:
                    continue
                if args.limit and count >= args.limit:
                    break
                prompts.append(
                    build_desc_probe(sl, mention, table, instance_id=f"probe{count:06d}")
                )
                count += 1
    elif args.task == "lama":
        src = _require(Path(args.input))
        inputs.append(src)
        if getattr(args, "scorer", None) or os.environ.get("KILM_SCORER"):
            scorer = _make_scorer(args)
            from .scoring import ScoreRequest

            rows = list(read_jsonl(src))
            responses = scorer.run(
                [ScoreRequest(id=str(i), verb="tokenize", text=r["answer"]) for i, r in enumerate(rows)]
            )
            counts = {r.id: r.token_count for r in responses}
            token_counters = [lambda _a, i=i: counts.get(str(i)) or 0 for i in range(len(rows))]
        else:
            rows = list(read_jsonl(src))
            token_counters = [lambda a: len(a.split())] * len(rows)
        for i, row in enumerate(rows):
            inst = ClozeInstance(
                statement_with_blank=row["statement"],
                answer=row["answer"],
                relation_tag=row.get("relation", ""),
            )
            prompt = build_lama_cloze(inst, token_counters[i], instance_id=f"lama{i:06d}")
            if prompt is None:
                filtered += 1
            else:
                prompts.append(prompt)
    else:
        raise ConfigError(f"unknown prompt task {args.task!r}")

    write_jsonl(out_path, (p.to_dict() for p in prompts))
    write_manifest(
        out_path.parent,
        f"prompt {args.task}",
        {k: v for k, v in vars(args).items() if k not in ("func",)},
        inputs,
    )
    log.info("wrote %d prompts (%d filtered) to %s", len(prompts), filtered, out_path)
    return EXIT_OK


# ---------------------------------------------------------------- rank

def cmd_rank(args) -> int:
    prompts_path = _require(Path(args.prompts))
    out_path = Path(args.out)
    scorer = _make_scorer(args)
    prompts = [Prompt.from_dict(row) for row in read_jsonl(prompts_path)]

    requests = [request_from_prompt(p, rid=f"r{i}") for i, p in enumerate(prompts)]
    responses = {r.id: r for r in scorer.run(requests)}

    rows: list[dict] = []
    groups: dict[str, list[tuple[Prompt, str]]] = {}
    order: list[str] = []
    for i, prompt in enumerate(prompts):
        rid = f"r{i}"
        if prompt.is_scoring:
            key = str(prompt.meta.get("instance", prompt.instance_id))
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append((prompt, rid))
        else:
            response = responses.get(rid)
            row = {
                "instance_id": prompt.instance_id,
                "type": "generation",
                "generated": response.generated_text if response and response.error is None else None,
                "golds": prompt.meta.get("golds") or [],
                "error": response.error if response else "no response",
            }
            rows.append(row)

    for key in order:
        members = groups[key]
        members.sort(key=lambda pr: pr[0].meta.get("candidate_index", 0))
        scores: list[CandidateScore] = []
        failure = None
        for prompt, rid in members:
            response = responses.get(rid)
            if response is None or response.error is not None or response.token_logprobs is None:
                failure = (response.error if response else None) or "no response"
                break
            scores.append(
                CandidateScore.from_logprobs(
                    prompt.meta.get("candidate_index", len(scores)), response.token_logprobs
                )
            )
        first_meta = members[0][0].meta
        row = {
            "instance_id": key,
            "type": "ranking",
            "mode": args.mode,
            "scored": failure is None,
            "winner_index": None,
            "predicted_title": None,
            "gold_title": first_meta.get("gold_title"),
            "in_kb": bool(first_meta.get("in_kb", True)),
            "scores": [dataclasses.asdict(s) for s in scores] if failure is None else [],
            "error": failure,
        }
        if failure is None:
            winner = pick_winner(scores, args.mode)
            row["winner_index"] = winner
            for prompt, _rid in members:
                if prompt.meta.get("candidate_index") == winner:
                    row["predicted_title"] = prompt.meta.get("candidate_title")
                    break
        rows.append(row)

    write_jsonl(out_path, rows)
    write_manifest(
        out_path.parent,
        "rank",
        {"prompts": str(prompts_path), "mode": args.mode,
         "scorer": getattr(args, "scorer", None) or os.environ.get("KILM_SCORER"),
         "ngram_corpus": getattr(args, "ngram_corpus", None)},
        [prompts_path],
    )
    log.info("ranked %d rows to %s", len(rows), out_path)
    return EXIT_OK


# ---------------------------------------------------------------- eval

def _parse_ks(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --min-freqs value {raw!r}") from exc


def _eval_inkb(rows: list[dict], stats: CorpusStats | None, ks: list[int]) -> dict:
    ed_results = [
        EDResult(
            instance_id=row["instance_id"],
            predicted_title=row.get("predicted_title"),
            gold_title=row.get("gold_title"),
            in_kb=bool(row.get("in_kb", True)),
            scored=bool(row.get("scored")) and row.get("predicted_title") is not None,
        )
        for row in rows
        if row.get("type") == "ranking"
    ]
    def safe_f1(results):
        try:
            return inkb_micro_f1(results)
        except MetricUndefinedError:
            return None

    entry = {
        "instances": len(ed_results),
        "scored": sum(1 for r in ed_results if r.scored),
        "value": safe_f1(ed_results),
    }
    if stats is not None:
        by_k = []
        for k in ks:
            kept = min_frequency_filter(ed_results, stats, k)
            by_k.append({"k": k, "instances": len(kept), "value": safe_f1(kept)})
        entry["by_min_frequency"] = by_k
    return entry


def _eval_gen(rows: list[dict]) -> dict:
    gen_results = [
        GenResult(row["instance_id"], row.get("generated") or "", tuple(row["golds"]))
        for row in rows
        if row.get("type") == "generation" and row.get("golds")
    ]
    entry: dict = {"instances": len(gen_results)}
    if gen_results:
        entry["exact_match"] = sum(exact_match(r) for r in gen_results) / len(gen_results)
        entry["unigram_f1"] = sum(unigram_f1(r) for r in gen_results) / len(gen_results)
    else:
        entry["exact_match"] = entry["unigram_f1"] = None
    return entry


def cmd_eval(args) -> int:
    results_paths = [_require(Path(p)) for p in args.results]
    out_path = Path(args.out)
    stats = None
    if args.stats:
        stats_dict = json.loads(_require(Path(args.stats)).read_text(encoding="utf-8"))
        stats = CorpusStats(
            entity_frequency=stats_dict.get("entity_frequency", {}),
            slice_count=stats_dict.get("slice_count", 0),
            mean_description_words=stats_dict.get("mean_description_words", 0.0),
            stride=stats_dict.get("stride", 512),
            insertion_overhead=stats_dict.get("insertion_overhead", 0.0),
        )
    ks = _parse_ks(args.min_freqs)

    def evaluate(rows: list[dict]) -> dict:
        if args.metric == "inkb_f1":
            return _eval_inkb(rows, stats, ks)
        if args.metric == "gen":
            return _eval_gen(rows)
        raise ConfigError(f"unknown metric {args.metric!r}")

    per_dataset = {p.stem: evaluate(list(read_jsonl(p))) for p in results_paths}
    all_rows = [row for p in results_paths for row in read_jsonl(p)]
    aggregate = evaluate(all_rows)
    report: dict = {"metric": args.metric, **aggregate}
    if len(results_paths) > 1:
        report["datasets"] = per_dataset

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    write_manifest(
        out_path.parent, "eval",
        {"results": [str(p) for p in results_paths], "metric": args.metric},
        results_paths,
    )
    print(json.dumps(report, ensure_ascii=False, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------- stats

def cmd_stats(args) -> int:
    corpus_dir = _require(Path(args.corpus))
    table = _load_table(corpus_dir)
    stats = corpus_stats(_load_slices(corpus_dir), table, stride=args.stride)
    payload = json.dumps(stats.to_dict(), ensure_ascii=False, indent=2)
    out_path = Path(args.out) if args.out else corpus_dir / STATS_FILE
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kilm",
        description="Knowledge-infilled corpus compiler and zero-shot knowledge prober",
    )
    parser.add_argument("--verbose", "-v", action="count", default=0)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="parse a dump into articles, table, slices and stats")
    p.add_argument("dump", help="pages-articles XML export (plain or bzip2)")
    p.add_argument("--out", required=True)
    p.add_argument("--stride", type=int, default=512)
    p.add_argument("--mode", choices=("primary", "upscaling"), default="primary")
    p.add_argument("--skip-title-regex", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("compile", help="compile slices into annotated training samples")
    p.add_argument("--corpus", required=True, help="directory produced by ingest")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None, help="JSON (or TOML on 3.11+) config file")
    p.add_argument("--variant", choices=("kilm", "kilm_end", "merge", "plain"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--mask-prob", dest="mask_prob", type=float, default=None)
    p.add_argument("--poisson-lambda", dest="poisson_lambda", type=float, default=None)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument(
        "--max-len-with-knowledge", dest="max_len_with_knowledge", type=int, default=None
    )
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("prompt", help="build structured prompts for a probing task")
    p.add_argument("task", choices=("ed", "appositive", "qa", "probe", "lama"))
    p.add_argument("--in", dest="input", default=None, help="task instances (jsonl)")
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=100, help="context tokens kept around a mention")
    p.add_argument("--format", choices=("plain", "benchmark"), default="plain",
                   help="ed: 'benchmark' converts [START_ENT] marker files")
    p.add_argument("--table", default=None,
                   help="ed benchmark conversion: knowledge table for candidate descriptions")
    p.add_argument("--pool", default=None, help="qa: exemplar pool (jsonl)")
    p.add_argument("--questions", default=None, help="qa: test questions (jsonl)")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--corpus", default=None, help="probe: ingest output directory")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--scorer", default=None, help="lama: scorer command for the answer-length filter")
    p.add_argument("--ngram-corpus", dest="ngram_corpus", default=None)
    p.add_argument("--ngram-order", dest="ngram_order", type=int, default=2)
    p.add_argument("--ngram-delta", dest="ngram_delta", type=float, default=1.0)
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("rank", help="score prompts and rank candidates / run generations")
    p.add_argument("--prompts", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=RANKING_MODES, default="perplexity")
    p.add_argument("--scorer", default=None, help="scorer command (default: $KILM_SCORER)")
    p.add_argument("--ngram-corpus", dest="ngram_corpus", default=None,
                   help="train the built-in n-gram scorer on this token file")
    p.add_argument("--ngram-order", dest="ngram_order", type=int, default=2)
    p.add_argument("--ngram-delta", dest="ngram_delta", type=float, default=1.0)
    p.add_argument("--max-inflight", dest="max_inflight", type=int, default=32)
    p.add_argument("--timeout", type=float, default=120.0)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", help="compute metrics over rank results")
    p.add_argument("--results", required=True, nargs="+",
                   help="one results file per dataset; several get an aggregate")
    p.add_argument("--metric", choices=("inkb_f1", "gen"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats", default=None, help="stats.json for frequency-filtered breakdowns")
    p.add_argument("--min-freqs", dest="min_freqs", default="1,2,5,10,100,1000")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="recompute corpus statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--stride", type=int, default=512)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_MISSING_FILE
    except ConfigError as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_BAD_CONFIG
    except ScorerError as exc:
        log.error("scorer failure: %s", exc)
        return EXIT_SCORER
    except KilmError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
