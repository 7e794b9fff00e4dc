"""Command line front end: one subcommand per pipeline stage.

Exit codes: 0 ok, 1 verification failure, 2 config, 3 lexicon,
4 grammar, 5 corpus, 6 eval.
"""
from __future__ import annotations

import argparse
import sys

from . import classify as classify_mod
from . import evaluation, pipeline, reference
from .concord import format_concordance, sort_concordance
from .errors import (
    ConfigError,
    CycleError,
    EmptyGold,
    EmptyInput,
    EmptySystem,
    InvalidEncoding,
    LemmaTooShort,
    LexgramError,
    MalformedEntry,
    MalformedGold,
    MalformedGraph,
    MalformedParadigm,
    UnknownParadigm,
    UnresolvedCall,
    ZeroRecall,
)
from .inflect import expand_lexicon, load_lemma_entries, load_paradigms
from .lexicon import build_index, serialize_entry
from .rtn import flatten, locate
from .textproc import dump_tagged

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_LEXICON = 3
EXIT_GRAMMAR = 4
EXIT_CORPUS = 5
EXIT_EVAL = 6

_EXIT_BY_ERROR = (
    (ConfigError, EXIT_CONFIG),
    ((MalformedEntry, MalformedParadigm, UnknownParadigm, LemmaTooShort), EXIT_LEXICON),
    ((MalformedGraph, UnresolvedCall, CycleError), EXIT_GRAMMAR),
    ((InvalidEncoding, EmptyInput), EXIT_CORPUS),
    ((EmptyGold, EmptySystem, ZeroRecall, MalformedGold), EXIT_EVAL),
)


def _exit_code(err: LexgramError) -> int:
    for types, code in _EXIT_BY_ERROR:
        if isinstance(err, types):
            return code
    return 1


def _config(args) -> pipeline.RunConfig:
    return pipeline.parse_config(args.config)


def _cmd_run(args) -> int:
    cfg = _config(args)
    result = pipeline.run_pipeline(cfg, args.out)
    for path in result.written:
        print(path)
    return EXIT_OK


def _cmd_inflect(args) -> int:
    cfg = _config(args)
    if not cfg.lemmas:
        raise ConfigError("config has no lemma files to inflect")
    paradigms = load_paradigms(cfg.paradigms)
    for path in cfg.lemmas:
        for entry in expand_lexicon(load_lemma_entries(path), paradigms):
            print(serialize_entry(entry))
    return EXIT_OK


def _cmd_index(args) -> int:
    cfg = _config(args)
    index = build_index(pipeline.build_entries(cfg))
    print(f"entries={index.num_entries}\tforms={index.num_forms}"
          f"\tanalyses={index.num_analyses}")
    return EXIT_OK


def _cmd_tag(args) -> int:
    cfg = _config(args)
    index = build_index(pipeline.build_entries(cfg))
    docs = pipeline.load_corpus(cfg)
    if args.doc:
        docs = [(doc_id, text) for doc_id, text in docs if doc_id == args.doc]
        if not docs:
            raise ConfigError(f"doc id {args.doc!r} not in corpus")
    for doc_id, tagged in pipeline.tag_corpus(docs, index, cfg.case_policy):
        sys.stdout.write(dump_tagged(tagged))
    return EXIT_OK


def _grammar_of(cfg: pipeline.RunConfig, which: str):
    grammars = pipeline.load_grammars(cfg)
    return grammars.pn if which == "pn" else grammars.svc


def _located(cfg: pipeline.RunConfig, which: str, policy: str | None):
    entries = pipeline.build_entries(cfg)
    index = build_index(entries)
    docs = pipeline.load_corpus(cfg)
    tagged_docs = pipeline.tag_corpus(docs, index, cfg.case_policy)
    grammar = _grammar_of(cfg, which)
    flat = flatten(grammar)
    chosen = policy or cfg.policy
    return tagged_docs, [(doc_id, locate(flat, tagged, chosen))
                         for doc_id, tagged in tagged_docs]


def _cmd_locate(args) -> int:
    cfg = _config(args)
    _, located = _located(cfg, args.grammar, args.policy)
    for doc_id, matches in located:
        for m in matches:
            print(f"{doc_id}\t{m.start_byte}\t{m.end_byte}"
                  f"\t{m.start_token}\t{m.end_token}\t{m.grammar}")
    return EXIT_OK


def _cmd_concord(args) -> int:
    cfg = _config(args)
    tagged_docs, located = _located(cfg, args.grammar, None)
    lines = pipeline.concordance_for(located, tagged_docs, cfg.width)
    lines = sort_concordance(lines, args.order)
    sys.stdout.write(format_concordance(lines))
    return EXIT_OK


def _cmd_classify(args) -> int:
    cfg = _config(args)
    entries = pipeline.build_entries(cfg)
    grammars = pipeline.load_grammars(cfg)
    docs = pipeline.load_corpus(cfg)
    rows = classify_mod.by_subcategory(
        docs, entries, grammars.pn, grammars.svc, cfg.subcats,
        pn_by_subcat=grammars.pn_by_subcat, svc_by_subcat=grammars.svc_by_subcat,
        policy=cfg.policy, case_policy=cfg.case_policy)
    overall = rows[-1]
    counts = classify_mod.ClassifiedCounts(overall.pn, overall.svc_raw,
                                           overall.svc, overall.pn - overall.svc)
    sys.stdout.write(classify_mod.format_classification(
        counts, rows, rounding=cfg.rounding))
    return EXIT_OK


def _cmd_eval(args) -> int:
    cfg = _config(args)
    if not cfg.gold:
        raise ConfigError("config has no gold file")
    result = pipeline.run_pipeline(cfg, args.out) if (args.write or args.out) \
        else _eval_only(cfg)
    sys.stdout.write(pipeline.format_metrics(result.metric_rows, cfg.rounding))
    return EXIT_OK


def _eval_only(cfg: pipeline.RunConfig) -> pipeline.PipelineResult:
    entries = pipeline.build_entries(cfg)
    index = build_index(entries)
    grammars = pipeline.load_grammars(cfg)
    docs = pipeline.load_corpus(cfg)
    tagged_docs = pipeline.tag_corpus(docs, index, cfg.case_policy)
    pn_located = pipeline.locate_corpus(tagged_docs, grammars.pn, cfg.policy)
    svc_located = pipeline.locate_corpus(tagged_docs, grammars.svc, cfg.policy)
    pn_lines = pipeline.concordance_for(pn_located, tagged_docs, cfg.width)
    svc_lines = pipeline.concordance_for(svc_located, tagged_docs, cfg.width)
    by_doc = dict(pn_located)
    counts = classify_mod.combine([
        classify_mod.classify_pn(by_doc[doc_id], svc) for doc_id, svc in svc_located])
    rows, _, corrected = pipeline._eval_stage(cfg, pn_lines, svc_lines, counts)
    return pipeline.PipelineResult(counts, [], pn_lines, svc_lines, rows,
                                   corrected, [])


def _cmd_report(args) -> int:
    cfg = _config(args)
    result = pipeline.run_pipeline(cfg, args.out)
    counts = result.counts
    print("pipeline report")
    print(f"  noun matches:          {counts.pn_total}")
    print(f"  verb-grammar matches:  {counts.svc_total}")
    print(f"  with support verb:     {counts.pn_with_sv}")
    print(f"  without support verb:  {counts.pn_without_sv}")
    print(f"  proportion:            {evaluation.format_ratio(counts.proportion)}"
          f" ({evaluation.percent(counts.proportion, cfg.rounding)})")
    if result.corrected_counts:
        corr_pn, corr_svc = result.corrected_counts
        proportion = corr_svc / corr_pn if corr_pn else 0.0
        print(f"  corrected counts:      {corr_pn:.4f} / {corr_svc:.4f}")
        print(f"  corrected proportion:  {evaluation.format_ratio(proportion)}"
              f" ({evaluation.percent(proportion, cfg.rounding)})")
    print("  subcategories:")
    for row in result.rows:
        corrected = "-" if row.corrected_ratio is None \
            else evaluation.percent(row.corrected_ratio, cfg.rounding)
        print(f"    {row.subcat}\tpn={row.pn}\tsvc={row.svc}"
              f"\tratio={evaluation.percent(row.ratio_svc_pn, cfg.rounding)}"
              f"\tcorrected={corrected}")
    print("  report files:")
    for path in result.written:
        print(f"    {path}")
    return EXIT_OK


def _cmd_verify_tables(args) -> int:
    cells = reference.verify_tables()
    sys.stdout.write(reference.format_cells(cells))
    failed = [c for c in cells if c.status == reference.FAIL]
    flagged = [c for c in cells if c.status == reference.FLAG]
    print(f"# {len(cells)} cells: {len(cells) - len(failed) - len(flagged)} pass, "
          f"{len(flagged)} flagged, {len(failed)} fail")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexgram",
        description="finite-state lexicon-grammar engine for support verb "
                    "constructions and predicative nouns")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(cmd, fn, **extra):
        p = sub.add_parser(cmd, **extra)
        p.add_argument("-c", "--config", required=True, help="run config file")
        p.set_defaults(fn=fn)
        return p

    p = with_config("run", _cmd_run, help="run the whole pipeline")
    p.add_argument("--out", help="output directory (overrides the config)")
    with_config("inflect", _cmd_inflect, help="expand lemma entries to lexicon lines")
    with_config("index", _cmd_index, help="build the lexicon index and print stats")
    p = with_config("tag", _cmd_tag, help="dump the tagged corpus as TSV")
    p.add_argument("--doc", help="restrict to one doc id")
    p = with_config("locate", _cmd_locate, help="print match spans as TSV")
    p.add_argument("--grammar", choices=("pn", "svc"), required=True)
    p.add_argument("--policy", choices=("longest", "all", "shortest"))
    p = with_config("concord", _cmd_concord, help="print a concordance as TSV")
    p.add_argument("--grammar", choices=("pn", "svc"), required=True)
    p.add_argument("--order", choices=("text", "center", "left-reversed"),
                   default="text")
    with_config("classify", _cmd_classify, help="print classification counts as TSV")
    p = with_config("eval", _cmd_eval, help="print metrics against the gold file")
    p.add_argument("--out", help="also write the full report files")
    p.add_argument("--write", action="store_true",
                   help="run the writing pipeline instead of eval only")
    p = with_config("report", _cmd_report, help="run everything and print a summary")
    p.add_argument("--out", help="output directory (overrides the config)")
    p = sub.add_parser("verify-tables",
                       help="recheck the reference table arithmetic")
    p.set_defaults(fn=_cmd_verify_tables)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except LexgramError as err:
        print(f"lexgram: {err.__class__.__name__}: {err}", file=sys.stderr)
        return _exit_code(err)


if __name__ == "__main__":
    sys.exit(main())
