"""Command-line workspace for building and editing BAC files.

Subcommands::

    bac validate <file.bac>          check the laws; exit 0 iff valid
    bac show <file.bac>              print canonical text and symbols
    bac draw <file.bac> -o out.dot   export the utility-pole diagram
    bac apply <script.bacs>          run an edit script
    bac repl                         read script lines interactively

Scripts hold one command per line (``#`` starts a comment); each line
maps to exactly one library operation and runs transactionally: a
failing line leaves the workspace untouched and reports the operation's
error code.  See the README for the command grammar.  Exit codes:
0 success, 1 operation or law failure, 2 usage or syntax failure.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from . import ops, serde
from .core import BacError, Node, symbols, validate

_SLOT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ScriptSyntaxError(Exception):
    """A malformed script line; reported with its line number."""


class Workspace(dict):
    """Named slots holding validated nodes."""

    def get_node(self, name: str) -> Node:
        if name not in self:
            raise ops.NotFoundError(f"no slot named {name}")
        return self[name]

    def put(self, name: str, node: Node):
        if not _SLOT_RE.match(name):
            raise ScriptSyntaxError(f"bad slot name {name!r}")
        report = validate(node)
        if not report.ok:
            raise serde.LawViolationError(report)
        self[name] = node


def _nat(tok: str) -> int:
    if not tok.isdigit():
        raise ScriptSyntaxError(f"expected a natural number, got {tok!r}")
    return int(tok)


def _nat_list(tok: str) -> list[int]:
    if tok == "":
        return []
    return [_nat(t) for t in tok.split(",")]


def _chain(tok: str) -> tuple[int, int]:
    parts = tok.split(",")
    if len(parts) != 2:
        raise ScriptSyntaxError(f"expected a chain s1,s2, got {tok!r}")
    return (_nat(parts[0]), _nat(parts[1]))


def _chain_list(tok: str) -> list[tuple[int, int]]:
    if tok == "":
        return []
    return [_chain(t) for t in tok.split(";")]


def _pair_of_chains(tok: str) -> tuple[tuple[int, int], tuple[int, int]]:
    parts = tok.split(":")
    if len(parts) != 2:
        raise ScriptSyntaxError(f"expected s1,s2:s1,s2, got {tok!r}")
    return (_chain(parts[0]), _chain(parts[1]))


def _symbol_map(tok: str) -> dict[int, int]:
    out = {}
    for item in tok.split(","):
        k, sep, v = item.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected k=v, got {item!r}")
        out[_nat(k)] = _nat(v)
    return out


def _chain_map(tok: str) -> dict[tuple[int, int], int]:
    out = {}
    if tok == "":
        return out
    for item in tok.split(";"):
        c, sep, v = item.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected s1,s2=sym, got {item!r}")
        out[_chain(c)] = _nat(v)
    return out


def _split_flags(args, allowed):
    """Separate positional words from repeated --flag value pairs."""
    pos = []
    flags = {name: [] for name in allowed}
    i = 0
    while i < len(args):
        a = args[i]
        if a.startswith("--"):
            name = a[2:]
            if name not in flags:
                raise ScriptSyntaxError(f"unknown option --{name}")
            if i + 1 >= len(args):
                raise ScriptSyntaxError(f"--{name} needs a value")
            flags[name].append(args[i + 1])
            i += 2
        else:
            pos.append(a)
            i += 1
    return pos, flags


def _need(pos, n, usage):
    if len(pos) != n:
        raise ScriptSyntaxError(f"usage: {usage}")
    return pos


class Runner:
    """Executes script lines against a workspace."""

    def __init__(self, ws: Workspace, dry_run: bool = False, base_dir: str = "."):
        self.ws = ws
        self.dry_run = dry_run
        self.base_dir = base_dir

    def _path(self, p):
        return p if os.path.isabs(p) else os.path.join(self.base_dir, p)

    def execute(self, line: str) -> list[str]:
        """Run one command; returns the lines it prints."""
        words = line.split()
        cmd, args = words[0], words[1:]
        handler = _COMMANDS.get(cmd)
        if handler is None:
            raise ScriptSyntaxError(f"unknown command {cmd!r}")
        return handler(self, args)


def _fmt_symbols(node):
    return "symbols {" + ",".join(str(s) for s in symbols(node)) + "}"


def _cmd_new(r, args):
    pos, _ = _split_flags(args, ())
    if len(pos) == 2 and pos[1] == "empty":
        r.ws.put(pos[0], ops.empty())
    elif len(pos) == 3 and pos[1] == "singleton":
        r.ws.put(pos[0], ops.singleton(_nat(pos[2])))
    else:
        raise ScriptSyntaxError("usage: new <slot> empty | new <slot> singleton <sym>")
    return []


def _cmd_nullitope(r, args):
    (slot,) = _need(args, 1, "nullitope <slot>")
    r.ws.put(slot, ops.empty())
    return []


def _cmd_introduce(r, args):
    slot, sym = _need(args, 2, "introduce <slot> <sym>")
    node = r.ws.get_node(slot)
    r.ws.put(slot, ops.merge_root_nodes([node, ops.singleton(_nat(sym))]))
    return []


def _cmd_load(r, args):
    slot, path = _need(args, 2, "load <slot> <path>")
    with open(r._path(path), encoding="utf-8") as fh:
        r.ws.put(slot, serde.loads(fh.read()))
    return []


def _cmd_save(r, args):
    slot, path = _need(args, 2, "save <slot> <path>")
    node = r.ws.get_node(slot)
    if r.dry_run:
        return [f"dry-run: not writing {path}"]
    with open(r._path(path), "w", encoding="utf-8") as fh:
        fh.write(serde.dumps(node) + "\n")
    return []


def _cmd_show(r, args):
    (slot,) = _need(args, 1, "show <slot>")
    node = r.ws.get_node(slot)
    return [serde.dumps(node), _fmt_symbols(node)]


def _cmd_draw(r, args):
    pos = []
    outs = []
    i = 0
    while i < len(args):
        if args[i] in ("-o", "--o"):
            if i + 1 >= len(args):
                raise ScriptSyntaxError("-o needs a path")
            outs.append(args[i + 1])
            i += 2
        else:
            pos.append(args[i])
            i += 1
    (slot,) = _need(pos, 1, "draw <slot> -o <path.dot>")
    node = r.ws.get_node(slot)
    if not outs:
        return serde.to_dot(node).splitlines()
    if r.dry_run:
        return [f"dry-run: not writing {outs[-1]}"]
    with open(r._path(outs[-1]), "w", encoding="utf-8") as fh:
        fh.write(serde.to_dot(node))
    return []


def _cmd_merge_roots(r, args):
    if len(args) < 2:
        raise ScriptSyntaxError("usage: merge-roots <dst> <src>...")
    nodes = [r.ws.get_node(s) for s in args]
    r.ws.put(args[0], ops.merge_root_nodes(nodes))
    return []


def _cmd_remove_leaf(r, args):
    slot, sym = _need(args, 2, "remove-leaf <slot> <sym>")
    r.ws.put(slot, ops.remove_leaf_node(r.ws.get_node(slot), _nat(sym)))
    return []


def _cmd_remove_nd(r, args):
    slot, src, tgt = _need(args, 3, "remove-nd <slot> <src> <tgt>")
    r.ws.put(slot, ops.remove_nd_symbol(r.ws.get_node(slot), _nat(src), _nat(tgt)))
    return []


def _cmd_remove_node(r, args):
    slot, sym = _need(args, 2, "remove-node <slot> <sym>")
    r.ws.put(slot, ops.remove_node(r.ws.get_node(slot), _nat(sym)))
    return []


def _cmd_add_nd(r, args):
    pos, flags = _split_flags(args, ("coangle", "angle"))
    slot, src, tgt, sym = _need(pos, 4, "add-nd <slot> <src> <tgt> <sym> [--coangle c]* [--angle a]*")
    coangles = [ops.Coangle(*_pair_of_chains(t)) for t in flags["coangle"]]
    angles = [ops.Angle(*_pair_of_chains(t)) for t in flags["angle"]]
    node = r.ws.get_node(slot)
    r.ws.put(slot, ops.add_nd_symbol(node, _nat(src), _nat(tgt), _nat(sym), coangles, angles))
    return []


def _cmd_add_leaf(r, args):
    pos, flags = _split_flags(args, ("insert",))
    slot, src, sym = _need(pos, 3, "add-leaf <slot> <src> <sym> --insert s1,s2=sym ...")
    inserter = {}
    for tok in flags["insert"]:
        inserter.update(_chain_map(tok))
    r.ws.put(slot, ops.add_leaf_node(r.ws.get_node(slot), _nat(src), _nat(sym), inserter))
    return []


def _cmd_interpolate_init(r, args):
    pos, flags = _split_flags(args, ("map",))
    slot, tgt, sym = _need(pos, 3, "interpolate-init <slot> <tgt> <sym> --map k=v,...")
    if len(flags["map"]) != 1:
        raise ScriptSyntaxError("interpolate-init needs exactly one --map")
    mapping = _symbol_map(flags["map"][0])
    r.ws.put(slot, ops.add_parent_node_on_root(r.ws.get_node(slot), _nat(tgt), _nat(sym), mapping))
    return []


def _cmd_split_sym(r, args):
    pos, flags = _split_flags(args, ("part",))
    slot, src, tgt = _need(pos, 3, "split-sym <slot> <src> <tgt> --part sym=chains ...")
    parts = []
    for tok in flags["part"]:
        s, sep, chains = tok.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected sym=chains, got {tok!r}")
        parts.append((_nat(s), _chain_list(chains)))
    r.ws.put(slot, ops.split_symbol(r.ws.get_node(slot), _nat(src), _nat(tgt), parts))
    return []


def _cmd_split_root(r, args):
    if len(args) < 2:
        raise ScriptSyntaxError("usage: split-root <slot> <out>=syms ...")
    slot = args[0]
    outs = []
    groups = []
    for tok in args[1:]:
        name, sep, syms_ = tok.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected out=syms, got {tok!r}")
        outs.append(name)
        groups.append(_nat_list(syms_))
    pieces = ops.split_root_node(r.ws.get_node(slot), groups)
    for name, piece in zip(outs, pieces):
        r.ws.put(name, piece)
    return []


def _cmd_split_node(r, args):
    pos, flags = _split_flags(args, ("part",))
    slot, tgt = _need(pos, 2, "split-node <slot> <tgt> --part syms@chain=sym;... ...")
    parts = []
    for tok in flags["part"]:
        group, sep, splitter = tok.partition("@")
        if not sep:
            raise ScriptSyntaxError(f"expected syms@splitter, got {tok!r}")
        parts.append((_chain_map(splitter), _nat_list(group)))
    r.ws.put(slot, ops.split_node(r.ws.get_node(slot), _nat(tgt), parts))
    return []


def _cmd_merge_syms(r, args):
    slot, src, syms_, sym = _need(args, 4, "merge-syms <slot> <src> <syms> <sym>")
    r.ws.put(
        slot, ops.merge_symbols(r.ws.get_node(slot), _nat(src), _nat_list(syms_), _nat(sym))
    )
    return []


def _cmd_merge_nodes(r, args):
    pos, flags = _split_flags(args, ("tgt", "merge"))
    (slot,) = _need(pos, 1, "merge-nodes <slot> --tgt sym=chains ... --merge s,r1,r2=sym ...")
    fams = []
    for tok in flags["tgt"]:
        s, sep, chains = tok.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected sym=chains, got {tok!r}")
        fams.append((_nat(s), _chain_list(chains)))
    merger = {}
    for tok in flags["merge"]:
        key, sep, v = tok.partition("=")
        if not sep:
            raise ScriptSyntaxError(f"expected s,r1,r2=sym, got {tok!r}")
        nums = _nat_list(key)
        if len(nums) < 3:
            raise ScriptSyntaxError(f"--merge needs an ancestor and at least two symbols: {tok!r}")
        merger[(nums[0], tuple(nums[1:]))] = _nat(v)
    r.ws.put(slot, ops.merge_nodes(r.ws.get_node(slot), fams, merger))
    return []


def _cmd_relabel(r, args):
    pos, flags = _split_flags(args, ("map",))
    slot, tgt = _need(pos, 2, "relabel <slot> <tgt> --map k=v,...")
    if len(flags["map"]) != 1:
        raise ScriptSyntaxError("relabel needs exactly one --map")
    r.ws.put(slot, ops.relabel(r.ws.get_node(slot), _nat(tgt), _symbol_map(flags["map"][0])))
    return []


def _cmd_rewire(r, args):
    slot, tgt, syms_ = _need(args, 3, "rewire <slot> <tgt> <syms>")
    r.ws.put(slot, ops.rewire(r.ws.get_node(slot), _nat(tgt), _nat_list(syms_)))
    return []


def _cmd_duplicate_sym(r, args):
    slot, src, tgt, syms_ = _need(args, 4, "duplicate-sym <slot> <src> <tgt> <syms>")
    r.ws.put(
        slot,
        ops.duplicate_nd_symbol(r.ws.get_node(slot), _nat(src), _nat(tgt), _nat_list(syms_)),
    )
    return []


def _cmd_duplicate_node(r, args):
    pos, flags = _split_flags(args, ("splitter",))
    slot, tgt = _need(pos, 2, "duplicate-node <slot> <tgt> --splitter chain=sym;... ...")
    splitters = [_chain_map(tok) for tok in flags["splitter"]]
    r.ws.put(slot, ops.duplicate_node(r.ws.get_node(slot), _nat(tgt), splitters))
    return []


def _cmd_partition_prefix(r, args):
    slot, sym = _need(args, 2, "partition-prefix <slot> <sym>")
    groups = ops.partition_prefix(r.ws.get_node(slot), _nat(sym))
    if not groups:
        return ["(no proper decomposition)"]
    return ["group: " + ";".join(f"{a},{b}" for a, b in g) for g in groups]


def _cmd_partition_syms(r, args):
    (slot,) = _need(args, 1, "partition-syms <slot>")
    groups = ops.partition_symbols(r.ws.get_node(slot))
    if not groups:
        return ["(no proper symbols)"]
    return ["group: " + ",".join(str(s) for s in g) for g in groups]


def _cmd_candidates(r, args):
    slot, src, tgt = _need(args, 3, "candidates <slot> <src> <tgt>")
    co, an = ops.find_valid_coangles_angles(_nat(src), _nat(tgt), r.ws.get_node(slot))
    out = []
    for i, picks in enumerate(co):
        body = " ".join(f"{c.short[0]},{c.short[1]}:{c.long[0]},{c.long[1]}" for c in picks)
        out.append(f"coangle[{i}]: {body or '(none)'}")
    for i, picks in enumerate(an):
        body = " ".join(
            f"{a.from_tgt[0]},{a.from_tgt[1]}:{a.from_src[0]},{a.from_src[1]}" for a in picks
        )
        out.append(f"angle[{i}]: {body or '(none)'}")
    if not out:
        out.append("(no picklists: no wires need choosing)")
    return out


_COMMANDS = {
    "new": _cmd_new,
    "load": _cmd_load,
    "save": _cmd_save,
    "show": _cmd_show,
    "draw": _cmd_draw,
    "merge-roots": _cmd_merge_roots,
    "remove-leaf": _cmd_remove_leaf,
    "remove-nd": _cmd_remove_nd,
    "remove-node": _cmd_remove_node,
    "add-nd": _cmd_add_nd,
    "add-leaf": _cmd_add_leaf,
    "interpolate-init": _cmd_interpolate_init,
    "split-sym": _cmd_split_sym,
    "split-root": _cmd_split_root,
    "split-node": _cmd_split_node,
    "merge-syms": _cmd_merge_syms,
    "merge-nodes": _cmd_merge_nodes,
    "relabel": _cmd_relabel,
    "rewire": _cmd_rewire,
    "duplicate-sym": _cmd_duplicate_sym,
    "duplicate-node": _cmd_duplicate_node,
    "partition-prefix": _cmd_partition_prefix,
    "partition-syms": _cmd_partition_syms,
    "candidates": _cmd_candidates,
    # geometric verb sugar
    "nullitope": _cmd_nullitope,
    "introduce": _cmd_introduce,
    "incident": _cmd_add_nd,
    "disconnect": _cmd_split_sym,
    "unincident": _cmd_remove_nd,
    "connect": _cmd_merge_syms,
    "remove": _cmd_remove_node,
    "split": _cmd_split_node,
    "merge": _cmd_merge_nodes,
}

#: Commands that change slots; the transcript reports symbol counts for them.
_MUTATORS = {
    "new", "load", "merge-roots", "remove-leaf", "remove-nd", "remove-node",
    "add-nd", "add-leaf", "interpolate-init", "split-sym", "split-root",
    "split-node", "merge-syms", "merge-nodes", "relabel", "rewire",
    "duplicate-sym", "duplicate-node", "nullitope", "introduce", "incident",
    "disconnect", "unincident", "connect", "remove", "split", "merge",
}


def _color_enabled():
    return os.environ.get("BAC_COLOR", "0") == "1"


def _paint(text, color):
    if not _color_enabled():
        return text
    codes = {"green": "32", "red": "31"}
    return f"\x1b[{codes[color]}m{text}\x1b[0m"


def run_script(lines, runner: Runner, out=None, keep_going=False, start=1) -> int:
    """Execute script lines; returns the process exit code."""
    out = sys.stdout if out is None else out
    status = 0
    for n, raw in enumerate(lines, start=start):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            output = runner.execute(stripped)
        except ScriptSyntaxError as exc:
            print(_paint(f"error line {n}: SyntaxError: {exc}", "red"), file=out)
            return 2
        except BacError as exc:
            print(_paint(f"error line {n}: {exc}", "red"), file=out)
            status = 1
            if not keep_going:
                return status
            continue
        words = stripped.split()
        note = ""
        if words[0] in _MUTATORS:
            slots = [w for w in words[1:] if _SLOT_RE.match(w) and w in runner.ws]
            note = "; " + ", ".join(
                f"{s}: {len(symbols(runner.ws[s]))} symbols" for s in dict.fromkeys(slots)
            )
        print(_paint(f"ok line {n}: {stripped}{note}", "green"), file=out)
        for extra in output:
            print(extra, file=out)
    return status


def _load_node(path):
    with open(path, encoding="utf-8") as fh:
        return serde.loads(fh.read())


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bac", description="Edit and inspect bounded acyclic category files."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a .bac file against the laws")
    p.add_argument("file")

    p = sub.add_parser("show", help="print canonical text and symbols of a .bac file")
    p.add_argument("file")

    p = sub.add_parser("draw", help="export the utility-pole diagram of a .bac file")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, help="output .dot path")

    p = sub.add_parser("apply", help="run a .bacs edit script")
    p.add_argument("file")
    p.add_argument("--dry-run", action="store_true", help="run without writing files")
    p.add_argument("--keep-going", action="store_true", help="continue past failing lines")

    sub.add_parser("repl", help="read script commands interactively")

    args = parser.parse_args(argv)

    if args.command == "validate":
        try:
            _load_node(args.file)
        except serde.BacSyntaxError as exc:
            print(exc)
            return 2
        except serde.LawViolationError as exc:
            print(exc.report)
            return 1
        print("ok")
        return 0

    if args.command == "show":
        try:
            node = _load_node(args.file)
        except serde.BacSyntaxError as exc:
            print(exc)
            return 2
        except serde.LawViolationError as exc:
            print(exc.report)
            return 1
        print(serde.dumps(node))
        print(_fmt_symbols(node))
        return 0

    if args.command == "draw":
        try:
            node = _load_node(args.file)
        except serde.BacSyntaxError as exc:
            print(exc)
            return 2
        except serde.LawViolationError as exc:
            print(exc.report)
            return 1
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(serde.to_dot(node))
        return 0

    if args.command == "apply":
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        runner = Runner(Workspace(), dry_run=args.dry_run, base_dir=os.path.dirname(args.file) or ".")
        return run_script(lines, runner, keep_going=args.keep_going)

    if args.command == "repl":
        runner = Runner(Workspace(), base_dir=os.getcwd())
        status = 0
        lineno = 1
        while True:
            try:
                raw = input("bac> " if sys.stdin.isatty() else "")
            except EOFError:
                break
            code = run_script([raw], runner, keep_going=True, start=lineno)
            lineno += 1
            status = max(status, code)
        return status

    return 2


if __name__ == "__main__":
    sys.exit(main())
