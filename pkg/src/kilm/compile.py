"""Corpus compilation: window -> annotated training sample stream.

Per pass over the corpus, each window gets one sampled entity, the
knowledge block is inserted and masked, span corruption is applied, and
the sample is emitted with exact loss-weight counts. Everything is a
deterministic function of the run seed, so repeated runs (and any worker
count) produce byte-identical output.
"""

from __future__ import annotations

import multiprocessing
import random
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import ConfigError, MissingKnowledgeError
from .infill import (
    CorruptedInput,
    KnowledgeOverflowError,
    LABEL_COPY,
    LABEL_KNOWLEDGE,
    LossWeights,
    TrainingTarget,
    compute_loss_weights,
    kn_infill,
    kn_infill_end,
    kn_mask,
    merge_transform,
    plain_target,
)
from .knowledge import KnowledgeTable
from .rng import derive_seed
from .sampler import EpochSampler, sample_entity
from .slicing import DocumentSlice
from .textmask import text_mask
from .tokens import DESC_OPEN, ENT_OPEN, is_special

VARIANT_KILM = "kilm"
VARIANT_KILM_END = "kilm_end"
VARIANT_MERGE = "merge"
VARIANT_PLAIN = "plain"
VARIANTS = (VARIANT_KILM, VARIANT_KILM_END, VARIANT_MERGE, VARIANT_PLAIN)


@dataclass(frozen=True)
class CompileConfig:
    variant: str = VARIANT_KILM
    seed: int = 0
    epochs: int = 1
    mask_prob: float = 0.3
    poisson_lambda: float = 3.0
    stride: int = 512
    max_len_with_knowledge: int = 640

    def validate(self) -> "CompileConfig":
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if not 0 <= self.mask_prob < 1:
            raise ConfigError(f"mask_prob must be in [0, 1), got {self.mask_prob}")
        if self.poisson_lambda <= 0:
            raise ConfigError(f"poisson_lambda must be positive, got {self.poisson_lambda}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.stride < 16:
            raise ConfigError(f"stride must be >= 16, got {self.stride}")
        if self.max_len_with_knowledge < 16:
            raise ConfigError(f"max_len_with_knowledge too small: {self.max_len_with_knowledge}")
        return self


@dataclass
class TrainingSample:
    doc_id: str
    slice_index: int
    epoch: int
    entity: str  # canonical title, "" for plain samples
    variant: str
    x: CorruptedInput
    y: TrainingTarget
    weights: LossWeights
    seed_draw: int

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "slice_index": self.slice_index,
            "epoch": self.epoch,
            "entity": self.entity,
            "variant": self.variant,
            "x_tokens": self.x.tokens,
            "y_tokens": self.y.tokens,
            "y_labels": self.y.labels,
            "infill_spans": [list(span) for span in self.x.infill_spans],
            "alpha": [self.weights.infill_tokens, self.weights.total],
            "beta": [self.weights.knowledge_tokens, self.weights.total],
            "seed_draw": self.seed_draw,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainingSample":
        y_tokens, y_labels = list(d["y_tokens"]), list(d["y_labels"])
        mention_index = y_tokens.index(ENT_OPEN) if ENT_OPEN in y_tokens else -1
        y = TrainingTarget(y_tokens, y_labels, mention_index=mention_index)
        x_tokens = list(d["x_tokens"])
        k_len = sum(1 for lab in y_labels if lab == LABEL_KNOWLEDGE)
        knowledge_masked = k_len > 0
        k_start = x_tokens.index(DESC_OPEN) + 1 if knowledge_masked else -1
        x = CorruptedInput(
            tokens=x_tokens,
            maskable=[not is_special(tok) for tok in x_tokens],
            knowledge_masked=knowledge_masked,
            k_start=k_start,
            k_len=k_len,
            infill_spans=[tuple(span) for span in d["infill_spans"]],
        )
        weights = LossWeights(d["alpha"][0], d["beta"][0], d["alpha"][1])
        return cls(
            doc_id=d["doc_id"],
            slice_index=d["slice_index"],
            epoch=d["epoch"],
            entity=d["entity"],
            variant=d["variant"],
            x=x,
            y=y,
            weights=weights,
            seed_draw=d["seed_draw"],
        )


@dataclass
class CompileReport:
    emitted: int = 0
    plain: int = 0
    skipped: int = 0

    def merge(self, other: "CompileReport") -> None:
        self.emitted += other.emitted
        self.plain += other.plain
        self.skipped += other.skipped


def _masked_sample(
    y: TrainingTarget,
    slice_: DocumentSlice,
    entity: str,
    epoch: int,
    config: CompileConfig,
    purpose: str,
) -> TrainingSample:
    seed_draw = derive_seed(config.seed, slice_.doc_id, slice_.slice_index, epoch, purpose)
    x = kn_mask(y)
    x = text_mask(x, random.Random(seed_draw), config.mask_prob, config.poisson_lambda)
    return TrainingSample(
        doc_id=slice_.doc_id,
        slice_index=slice_.slice_index,
        epoch=epoch,
        entity=entity,
        variant=config.variant,
        x=x,
        y=y,
        weights=compute_loss_weights(y, x),
        seed_draw=seed_draw,
    )


def compile_slice(
    slice_: DocumentSlice, table: KnowledgeTable, config: CompileConfig
) -> tuple[list[TrainingSample], CompileReport]:
    """All samples for one window across every pass, in pass order."""
    sampler = EpochSampler(config.seed)
    samples: list[TrainingSample] = []
    report = CompileReport()
    for epoch in range(1, config.epochs + 1):
        if config.variant in (VARIANT_PLAIN, VARIANT_MERGE):
            samples.append(_masked_sample(plain_target(slice_), slice_, "", epoch, config, "mask"))
            report.plain += 1
            if config.variant == VARIANT_MERGE:
                mention = sample_entity(slice_, sampler, table)
                if mention is not None:
                    entity = table.resolve(mention.entity)
                    entry = table.lookup(mention.entity)
                    tokens = merge_transform(entity, entry.description)
                    sentence = TrainingTarget(tokens, [LABEL_COPY] * len(tokens))
                    samples.append(
                        _masked_sample(sentence, slice_, entity, epoch, config, "merge_mask")
                    )
            continue
        mention = sample_entity(slice_, sampler, table)
        if mention is None:
            samples.append(_masked_sample(plain_target(slice_), slice_, "", epoch, config, "mask"))
            report.plain += 1
            continue
        transform = kn_infill_end if config.variant == VARIANT_KILM_END else kn_infill
        try:
            y = transform(slice_, mention, table, config.max_len_with_knowledge)
        except (KnowledgeOverflowError, MissingKnowledgeError):
            report.skipped += 1
            continue
        samples.append(
            _masked_sample(y, slice_, table.resolve(mention.entity), epoch, config, "mask")
        )
    report.emitted = len(samples)
    return samples, report


_WORKER_STATE: dict = {}


def _worker_init(table: KnowledgeTable, config: CompileConfig) -> None:
    _WORKER_STATE["table"] = table
    _WORKER_STATE["config"] = config


def _worker_compile(slice_: DocumentSlice):
    return compile_slice(slice_, _WORKER_STATE["table"], _WORKER_STATE["config"])


def compile_corpus(
    slices: Iterable[DocumentSlice],
    table: KnowledgeTable,
    config: CompileConfig,
    jobs: int = 1,
) -> tuple[list[TrainingSample], CompileReport]:
    """Compile every window; output is ordered by (epoch, doc_id, slice_index)
    and is identical for any ``jobs`` value."""
    config.validate()
    ordered = sorted(slices, key=lambda s: (s.doc_id, s.slice_index))
    if jobs <= 1:
        results = [compile_slice(s, table, config) for s in ordered]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs, initializer=_worker_init, initargs=(table, config)) as pool:
            results = pool.map(_worker_compile, ordered, chunksize=16)
    report = CompileReport()
    samples: list[TrainingSample] = []
    for slice_samples, slice_report in results:
        samples.extend(slice_samples)
        report.merge(slice_report)
    samples.sort(key=lambda s: s.epoch)  # stable: keeps (doc_id, slice_index) order
    return samples, report
