"""Control-flow-graph recovery and natural-loop detection for one function.

Leaders are the function entry, branch targets, and the fall-through
successors of control transfers. Natural loops come from dominator analysis:
a back edge t->h with h dominating t defines a loop whose body is everything
that reaches t without passing through h; loops sharing a header merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .listing import Function, Instruction


@dataclass
class BasicBlock:
    index: int
    start: int
    instructions: list[Instruction] = field(default_factory=list)
    successors: list[int] = field(default_factory=list)
    predecessors: list[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.instructions)

    @property
    def terminator(self) -> Instruction | None:
        return self.instructions[-1] if self.instructions else None


@dataclass
class Loop:
    header: int
    body: set[int]
    size: int  # total instructions across body blocks
    back_edges: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class CFG:
    function_name: str
    blocks: list[BasicBlock] = field(default_factory=list)
    dangling_targets: list[int] = field(default_factory=list)
    external_targets: list[int] = field(default_factory=list)
    unreachable: set[int] = field(default_factory=set)

    @property
    def edge_count(self) -> int:
        return sum(len(b.successors) for b in self.blocks)


def _is_block_end(insn: Instruction) -> bool:
    if insn.is_call:
        return False  # calls fall through unless noreturn, which stays unmodeled
    return (
        insn.is_return
        or insn.is_conditional
        or insn.is_unconditional_jump
        or (insn.is_indirect and insn.mnemonic.lstrip().lower().startswith("jmp"))
    )


def build_cfg(function: Function) -> CFG:
    cfg = CFG(function_name=function.name)
    insns = function.instructions
    if not insns:
        return cfg

    addr_index = {insn.address: i for i, insn in enumerate(insns)}
    low = function.start_address
    high = function.end_address

    leaders: set[int] = {0}
    for i, insn in enumerate(insns):
        if insn.explicit_branch_target is not None and not insn.is_call:
            target = insn.explicit_branch_target
            if low <= target < high:
                if target in addr_index:
                    leaders.add(addr_index[target])
                else:
                    cfg.dangling_targets.append(target)
            else:
                cfg.external_targets.append(target)
        if _is_block_end(insn) and i + 1 < len(insns):
            leaders.add(i + 1)

    ordered = sorted(leaders)
    starts = {idx: bi for bi, idx in enumerate(ordered)}
    for bi, start_idx in enumerate(ordered):
        end_idx = ordered[bi + 1] if bi + 1 < len(ordered) else len(insns)
        block = BasicBlock(index=bi, start=insns[start_idx].address,
                           instructions=insns[start_idx:end_idx])
        cfg.blocks.append(block)

    def block_of(insn_index: int) -> int | None:
        return starts.get(insn_index)

    for bi, block in enumerate(cfg.blocks):
        term = block.terminator
        if term is None:
            continue
        succs: list[int] = []
        target_block: int | None = None
        if term.explicit_branch_target is not None and not term.is_call:
            idx = addr_index.get(term.explicit_branch_target)
            if idx is not None and low <= term.explicit_branch_target < high:
                target_block = block_of(idx)
        fallthrough = bi + 1 if bi + 1 < len(cfg.blocks) else None

        if term.is_return:
            pass
        elif term.is_conditional:
            if target_block is not None:
                succs.append(target_block)
            if fallthrough is not None:
                succs.append(fallthrough)
        elif term.is_unconditional_jump or (term.is_indirect and not term.is_call):
            if target_block is not None:
                succs.append(target_block)
        else:
            if fallthrough is not None:
                succs.append(fallthrough)
        block.successors = succs

    for block in cfg.blocks:
        for s in block.successors:
            cfg.blocks[s].predecessors.append(block.index)

    cfg.unreachable = _unreachable_blocks(cfg)
    return cfg


def _unreachable_blocks(cfg: CFG) -> set[int]:
    if not cfg.blocks:
        return set()
    seen = {0}
    stack = [0]
    while stack:
        for s in cfg.blocks[stack.pop()].successors:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return {b.index for b in cfg.blocks} - seen


def compute_dominators(cfg: CFG) -> dict[int, set[int]]:
    """Iterative dominator sets over the reachable subgraph."""
    reachable = [b.index for b in cfg.blocks if b.index not in cfg.unreachable]
    if not reachable:
        return {}
    all_reachable = set(reachable)
    dom: dict[int, set[int]] = {0: {0}}
    for n in reachable:
        if n != 0:
            dom[n] = set(all_reachable)
    changed = True
    while changed:
        changed = False
        for n in reachable:
            if n == 0:
                continue
            preds = [p for p in cfg.blocks[n].predecessors if p in all_reachable]
            if preds:
                new = set.intersection(*(dom[p] for p in preds)) | {n}
            else:
                new = {n}
            if new != dom[n]:
                dom[n] = new
                changed = True
    return dom


def detect_loops(cfg: CFG) -> list[Loop]:
    """Natural loops from back edges; loops with a shared header merge."""
    dom = compute_dominators(cfg)
    loops: dict[int, Loop] = {}
    for block in cfg.blocks:
        if block.index in cfg.unreachable:
            continue
        for succ in block.successors:
            if succ in cfg.unreachable or succ not in dom.get(block.index, set()):
                continue
            header, tail = succ, block.index
            body = {header}
            stack = [tail]
            while stack:
                node = stack.pop()
                if node in body:
                    continue
                body.add(node)
                stack.extend(
                    p for p in cfg.blocks[node].predecessors if p not in cfg.unreachable
                )
            loop = loops.get(header)
            if loop is None:
                loops[header] = Loop(header=header, body=body, size=0,
                                     back_edges=[(tail, header)])
            else:
                loop.body |= body
                loop.back_edges.append((tail, header))
    out = []
    for header in sorted(loops):
        loop = loops[header]
        loop.size = sum(cfg.blocks[b].size for b in loop.body)
        out.append(loop)
    return out


def loop_nesting_depth(loops: list[Loop]) -> int:
    """Maximum containment depth among the merged natural loops."""
    depth = 0
    for loop in loops:
        d = 1 + sum(
            1
            for other in loops
            if other is not loop and loop.body < other.body
        )
        depth = max(depth, d)
    return depth
