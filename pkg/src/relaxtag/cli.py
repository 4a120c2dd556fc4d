"""Command-line front end: train, tag, evaluate, generate."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .constraints import (
    parse_constraints,
    read_constraints,
    serialize_constraints,
    write_constraints,
)
from .corpus import (
    TagSet,
    build_lexicon,
    corpus_stats,
    filter_lexicon,
    read_corpus,
    read_corrections,
    read_lexicon,
)
from .evaluation import (
    ModelCombination,
    evaluate,
    format_error_table,
    format_report_table,
    report_record,
)
from .models import learn_tree_constraints, make_tagger, tag_corpus
from .ngrams import collect_ngrams, serialize_ngram_table
from .relaxation import RelaxParams
from .synth import generate_synthetic_corpus, read_spec
from .trees import LearnerParams, format_tree, leaf_count


def _window(text: str) -> tuple[int, int]:
    try:
        left, right = (int(x) for x in text.split(","))
        return (left, right)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like '3,2'") from None


def _add_learner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--purity", type=float, default=0.99, help="leaf purity threshold")
    p.add_argument("--min-examples", type=int, default=10, help="leaf size threshold")
    p.add_argument("--chi2-alpha", type=float, default=0.05, help="branch-merge significance")
    p.add_argument("--holdout", type=float, default=0.10, help="pruning holdout fraction")
    p.add_argument("--window", type=_window, default=(3, 2), help="context window, e.g. 3,2")
    p.add_argument("--top-k", type=int, default=40, help="ambiguity classes to learn")


def _add_relax_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--support-norm", choices=("rational", "clamp"), default="rational")
    p.add_argument("--divisor", type=float, default=1.0)


def _learner_params(args) -> LearnerParams:
    return LearnerParams(
        purity_threshold=args.purity,
        min_examples=args.min_examples,
        chi2_significance=args.chi2_alpha,
        holdout_fraction=args.holdout,
        window=args.window,
        top_k_classes=args.top_k,
    )


def _relax_params(args) -> RelaxParams:
    return RelaxParams(
        max_iterations=args.max_iter,
        epsilon=args.epsilon,
        support_norm=args.support_norm,
        divisor=args.divisor,
    )


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_stats(args) -> int:
    sentences = read_corpus(args.corpus)
    lex = read_lexicon(args.lexicon) if args.lexicon else build_lexicon(sentences)
    stats = corpus_stats(sentences, lex)
    print(f"tokens               {stats.word_count}")
    print(f"sentences            {len(sentences)}")
    print(f"lexicon words        {len(lex)}")
    print(f"ambiguous fraction   {100 * stats.ambiguous_fraction:.2f}%")
    print(f"tags/word ambiguous  {stats.ambiguity_ratio_ambiguous:.2f}")
    print(f"tags/word overall    {stats.ambiguity_ratio_overall:.2f}")
    return 0


def cmd_lexicon_build(args) -> int:
    lex = build_lexicon(read_corpus(args.corpus))
    _write_or_print(corpus_mod.serialize_lexicon(lex), args.output)
    return 0


def cmd_lexicon_filter(args) -> int:
    lex = filter_lexicon(read_lexicon(args.lexicon), read_corrections(args.corrections))
    _write_or_print(corpus_mod.serialize_lexicon(lex), args.output)
    return 0


def cmd_ngrams_collect(args) -> int:
    table = collect_ngrams(read_corpus(args.corpus), args.order)
    _write_or_print(serialize_ngram_table(table), args.output)
    return 0


def cmd_trees_learn(args) -> int:
    sentences = read_corpus(args.corpus)
    lex = build_lexicon(sentences)
    cset, learned = learn_tree_constraints(sentences, lex, _learner_params(args), args.seed)
    print(f"{'class':<24} {'examples':>9} {'grown':>6} {'pruned':>7} {'leaves':>7} {'rules':>6}")
    for entry in learned:
        name = "-".join(entry.ambiguity_class.tags)
        print(
            f"{name:<24} {entry.n_grow + entry.n_holdout:>9} {entry.nodes_grown:>6}"
            f" {entry.nodes_pruned:>7} {leaf_count(entry.tree.root):>7} {len(entry.constraints):>6}"
        )
    print(f"total constraints: {len(cset)}")
    if args.tree_dir:
        tree_dir = Path(args.tree_dir)
        tree_dir.mkdir(parents=True, exist_ok=True)
        for entry in learned:
            name = "-".join(entry.ambiguity_class.tags)
            (tree_dir / f"{name}.tree").write_text(format_tree(entry.tree), encoding="utf-8")
    if args.output:
        write_constraints(list(cset), args.output)
    return 0


def cmd_constraints_compile(args) -> int:
    sentences = read_corpus(args.corpus)
    lex = build_lexicon(sentences)
    cset, _ = learn_tree_constraints(sentences, lex, _learner_params(args), args.seed)
    _write_or_print(serialize_constraints(list(cset)), args.output)
    return 0


def cmd_constraints_check(args) -> int:
    tagset = TagSet.from_sentences(read_corpus(args.corpus)) if args.corpus else None
    text = Path(args.file).read_text(encoding="utf-8")
    constraints, macros = parse_constraints(text, tagset)
    repeated = sum(any(it.repeated for it in c.context) for c in constraints)
    print(f"{len(constraints)} constraints, {len(macros)} macros, {repeated} with repeated items")
    return 0


def cmd_tag(args) -> int:
    train = read_corpus(args.train)
    lex = build_lexicon(train)
    tagset = TagSet.from_sentences(train)
    hand = read_constraints(args.hand, tagset) if args.hand else None
    prebuilt = {}
    if args.learned:
        prebuilt["C"] = read_constraints(args.learned, tagset, source="learned")
    tagger = make_tagger(
        ModelCombination.parse(args.models),
        train,
        lex,
        tagset,
        _learner_params(args),
        _relax_params(args),
        hand_written=hand,
        prebuilt=prebuilt,
        seed=args.seed,
    )
    if args.format == "tagged":
        sentences = [[w for w, _ in sent] for sent in read_corpus(args.input)]
    else:
        text = Path(args.input).read_text(encoding="utf-8")
        sentences = [line.split() for line in text.splitlines() if line.strip()]
    predictions, diagnostics = tag_corpus(tagger, sentences)
    tagged = [list(zip(words, tags)) for words, tags in zip(sentences, predictions)]
    _write_or_print(corpus_mod.serialize_tagged_corpus(tagged), args.output)
    if args.diagnostics and diagnostics:
        lines = [d.record(i) + "\n" for i, d in enumerate(diagnostics)]
        Path(args.diagnostics).write_text("".join(lines), encoding="utf-8")
    return 0


def cmd_eval(args) -> int:
    gold = read_corpus(args.gold)
    predicted = read_corpus(args.predicted)
    lex = build_lexicon(read_corpus(args.train)) if args.train else build_lexicon(gold)
    report = evaluate(gold, [[t for _, t in sent] for sent in predicted], lex)
    name = args.name or Path(args.predicted).stem
    print(format_report_table({name: report}), end="")
    if args.errors:
        pairs = [(g, p) for g, p, _ in report.top_errors(args.errors)]
        if pairs:
            print()
            print(format_error_table({name: report}, pairs), end="")
    print(report_record(name, report))
    return 0


def cmd_synth(args) -> int:
    spec = read_spec(args.spec)
    sentences = generate_synthetic_corpus(spec, args.size, args.seed)
    _write_or_print(corpus_mod.serialize_tagged_corpus(sentences), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxtag",
        description="Hybrid POS tagging: learned context constraints plus relaxation labelling.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for any random choice")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus and ambiguity statistics")
    p.add_argument("corpus")
    p.add_argument("--lexicon", help="use this lexicon instead of rebuilding")
    p.set_defaults(func=cmd_stats)

    lex = sub.add_parser("lexicon", help="lexicon derivation and noise filtering")
    lex_sub = lex.add_subparsers(dest="subcommand", required=True)
    p = lex_sub.add_parser("build")
    p.add_argument("corpus")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lexicon_build)
    p = lex_sub.add_parser("filter")
    p.add_argument("lexicon")
    p.add_argument("corrections")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lexicon_filter)

    ng = sub.add_parser("ngrams", help="n-gram statistics")
    ng_sub = ng.add_subparsers(dest="subcommand", required=True)
    p = ng_sub.add_parser("collect")
    p.add_argument("corpus")
    p.add_argument("--order", type=int, choices=(2, 3), default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ngrams_collect)

    tr = sub.add_parser("trees", help="decision-tree learning")
    tr_sub = tr.add_subparsers(dest="subcommand", required=True)
    p = tr_sub.add_parser("learn")
    p.add_argument("corpus")
    _add_learner_flags(p)
    p.add_argument("--tree-dir", help="write diagnostic tree files here")
    p.add_argument("-o", "--output", help="write compiled constraints here")
    p.set_defaults(func=cmd_trees_learn)

    cs = sub.add_parser("constraints", help="constraint compilation and validation")
    cs_sub = cs.add_subparsers(dest="subcommand", required=True)
    p = cs_sub.add_parser("compile")
    p.add_argument("corpus")
    _add_learner_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_constraints_compile)
    p = cs_sub.add_parser("check")
    p.add_argument("file")
    p.add_argument("--corpus", help="validate tags against this corpus")
    p.set_defaults(func=cmd_constraints_check)

    p = sub.add_parser("tag", help="tag a corpus with a model combination")
    p.add_argument("input")
    p.add_argument("--train", required=True, help="training corpus")
    p.add_argument("--models", default="B", help="B, T, C, H combination, or ML / HMM")
    p.add_argument("--hand", help="hand-written constraint file (for H)")
    p.add_argument("--learned", help="precompiled learned-constraint file (for C)")
    p.add_argument("--format", choices=("tagged", "raw"), default="tagged")
    p.add_argument("--diagnostics", help="write per-sentence relaxation records here")
    _add_learner_flags(p)
    _add_relax_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("eval", help="score a tagged corpus against gold")
    p.add_argument("gold")
    p.add_argument("predicted")
    p.add_argument("--train", help="training corpus for the ambiguity lexicon")
    p.add_argument("--name", help="model name for the report")
    p.add_argument("--errors", type=int, default=0, help="show the top-k error pairs")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic tagged corpus")
    p.add_argument("--spec", required=True, help="generator spec (JSON)")
    p.add_argument("--size", type=int, required=True, help="token budget")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
