"""Acceptance criteria, one test each.

Every test records a single ``C<n> PASS|FAIL ...`` line, shown in the
terminal summary (see conftest.py). Criteria that depend on published
numbers nobody has transcribed into the repo fail on purpose; the reason
is in the line itself.
"""

import contextlib
import hashlib
import random
import subprocess
import sys
import time

from conftest import ACCEPTANCE_LINES, TOY_NAMES
from mxg import engine, fastpath
from mxg import stat_smoke as ss
from mxg.equidist import exhaustive_k_of_v, full_report, k_of_v
from mxg.gf2 import char_poly, is_primitive_small, transition_matrix, weight
from mxg.params import lookup, registry

TABULATED = sorted(n for n in registry() if not n.startswith("toy"))

# Published reference values, keyed by set name. Empty: no parameter,
# weight or gap tables were available to transcribe.
PUBLISHED_WEIGHTS: dict[str, int] = {}
PUBLISHED_GAPS: dict[str, dict[str, list[int]]] = {}

# sha256 of `mxg gen --count 100000 --format raw` for fixed configurations
FROZEN_GEN = {
    ("mxg32-521", 5489, "weyl", "raw-words"):
        "e4a37c9c494efd8872d06d02f8992c647697d15744d9ed106fb01ad3a6081502",
    ("mxg64-607", 1, "linear", "raw-words"):
        "500bea4b113bb92d4f050f6711fff8c9c219d6bd6787e4251490ef19667a8011",
    ("mxg128-1279", 42, "none", "raw-words"):
        "3f7d9769e5b4c1173d346a49bed98ea77ed01b4eba9e8081e4a2b944d40c9bce",
    ("mxg32-521", 5489, "weyl", "real64"):
        "ab0146982a754616b3075ba1f4f7edcd27d4cb88fb0677de75c53a685f4b02cc",
    ("toy8-11", 7, "weyl", "int32"):
        "09c2b02568998f861fea8d92fb12d1602dd882be63ff25f41c4aea72f1243b6e",
}


@contextlib.contextmanager
def criterion(n: int, title: str):
    note = {}
    t0 = time.perf_counter()
    try:
        yield note
    except BaseException as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        ACCEPTANCE_LINES.append(f"C{n} FAIL {title}: {msg}")
        print(ACCEPTANCE_LINES[-1])
        raise
    el = time.perf_counter() - t0
    ACCEPTANCE_LINES.append(f"C{n} PASS {title}: {note.get('detail', '')} ({el:.1f}s)".replace(":  (", ": ("))
    print(ACCEPTANCE_LINES[-1])


def mxg(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "mxg", *args], input=stdin, capture_output=True, timeout=900)


def test_c1_charpoly_degree():
    with criterion(1, "charpoly degree p and irreducible for mxg32-521, mxg32-607") as note:
        out = []
        for name in ("mxg32-521", "mxg32-607"):
            t0 = time.perf_counter()
            r = mxg("analyze", "charpoly", "--param", name)
            el = time.perf_counter() - t0
            fields = dict(kv.split("=", 1) for kv in r.stdout.decode().split()[1:])
            p = lookup(name).p
            assert r.returncode == 0, r.stderr.decode()
            assert int(fields["degree"]) == p and fields["irreducible"] == "true", fields
            assert el < 300, f"{name} took {el:.0f}s"
            out.append(f"{name} degree={p} weight_ratio={fields['weight_ratio']}")
        note["detail"] = "; ".join(out)


def test_c2_weight_fidelity():
    with criterion(2, "charpoly weights equal published values") as note:
        for name in ("mxg32-521", "mxg32-607"):
            assert weight(char_poly(lookup(name))) == lookup(name).charpoly_weight
        missing = [n for n in TABULATED if n not in PUBLISHED_WEIGHTS]
        assert not missing, f"no published weights transcribed for {len(missing)} of {len(TABULATED)} sets"
        bad = [n for n in TABULATED if lookup(n).charpoly_weight != PUBLISHED_WEIGHTS[n]]
        assert not bad, f"weight mismatch: {bad}"
        note["detail"] = f"{len(TABULATED)} sets"


def test_c3_equidist_oracle():
    with criterion(3, "rank k(v) equals enumeration on every toy set") as note:
        t0 = time.perf_counter()
        cases = 0
        for name in TOY_NAMES:
            prm = lookup(name)
            assert prm.tempering_linear is not None, f"{name} has no linear tempering"
            for mode in ("none", "linear"):
                for v in range(1, prm.w + 1):
                    assert k_of_v(prm, v, mode) == exhaustive_k_of_v(prm, v, mode), (name, mode, v)
                    cases += 1
        el = time.perf_counter() - t0
        assert el < 120, f"{el:.0f}s"
        note["detail"] = f"{cases} (set, mode, v) cases"


def test_c4_engine_oracles():
    with criterion(4, "interpreter equals matrix stepping (toys) and fast path (all sets)") as note:
        rng = random.Random(4)
        for name in TOY_NAMES:
            prm = lookup(name)
            m = transition_matrix(prm)
            for _ in range(100):
                bits = rng.getrandbits(prm.p)
                s = engine.GeneratorState.from_effective_bits(prm, bits)
                for _ in range(100):
                    s.next_raw()
                    bits = m.apply(bits)
                    assert s.effective_bits() == bits, name
        for name in TABULATED:
            prm = lookup(name)
            a = engine.seed(prm, 5489)
            b = a.copy()
            fast = fastpath.to_ints(a._raw_block(100_000), prm.w)
            assert fast == [b.next_raw() for _ in range(100_000)], name
            assert a.oldest_first() == b.oldest_first(), name
        note["detail"] = f"{len(TOY_NAMES)} toys x 100 states x 100 steps; {len(TABULATED)} sets x 1e5 steps"


def test_c5_toy_full_period():
    with criterion(5, "toy raw period is 2^p - 1") as note:
        done = []
        for name in TOY_NAMES:
            prm = lookup(name)
            if not is_primitive_small(char_poly(prm)):
                continue
            period = engine.empirical_period(engine.seed(prm, 1), 1 << prm.p)
            assert period == (1 << prm.p) - 1, (name, period)
            done.append(name)
        assert done == TOY_NAMES, f"not primitive: {sorted(set(TOY_NAMES) - set(done))}"
        note["detail"] = ", ".join(f"{n}={(1 << lookup(n).p) - 1}" for n in done)


def test_c6_tempering_contracts():
    with criterion(6, "linear tempering inverts; weyl minus accumulator is raw") as note:
        rng = random.Random(6)
        for name in sorted(registry()):
            prm = lookup(name)
            ops = prm.tempering_linear.linear_ops
            for _ in range(1000):
                y = rng.getrandbits(prm.w)
                assert engine.untemper_linear(engine.temper_linear(y, ops, prm.w), ops, prm.w) == y, name
        # step by step, reading the accumulator after every output
        prm = lookup("mxg32-521")
        a = engine.seed(prm, 5489)
        b = a.copy()
        for i in range(100_000):
            out = a.next_word("weyl")
            assert (out - a.weyl_acc) & prm.word_mask == b.next_raw(), i
        # block form on every set
        for name in TABULATED:
            prm = lookup(name)
            a = engine.seed(prm, 1)
            b = a.copy()
            acc0 = a.weyl_acc
            weyl = fastpath.to_ints(a.generate(100_000, "weyl"), prm.w)
            raw = fastpath.to_ints(b.generate(100_000, "none"), prm.w)
            inc = prm.weyl_increment
            assert all((x - acc0 - (i + 1) * inc) & prm.word_mask == r for i, (x, r) in enumerate(zip(weyl, raw))), name
        note["detail"] = f"{len(registry())} tempering chains; 1e5 logged steps; {len(TABULATED)} sets in block form"


def test_c7_jump_ahead():
    with criterion(7, "jump(2^20) equals stepping on mxg32-521") as note:
        prm = lookup("mxg32-521")
        s = engine.seed(prm, 5489)
        t0 = time.perf_counter()
        jumped = engine.jump(s, 1 << 20, char_poly(prm))
        el = time.perf_counter() - t0
        stepped = s.copy()
        stepped.generate(1 << 20, "weyl")
        assert jumped == stepped
        assert el < 10, f"{el:.1f}s"
        note["detail"] = f"jump took {el:.2f}s"


C8_SETS = [n for n in TABULATED if lookup(n).w in (32, 64)]


def test_c8_statistical_echo():
    with criterion(8, "5-test battery on 10 MB int32 and real64 streams; controls rejected") as note:
        worst = (1.0, "")
        for name in C8_SETS:
            prm = lookup(name)
            for path in ("int32", "real64"):
                for o in ss.run_battery(prm, 5489, "weyl", path, 10 << 20):
                    assert 1e-4 <= o.p_value <= 1 - 1e-4, (name, path, o.test_name, o.p_value)
                    if o.two_sided < worst[0]:
                        worst = (o.two_sided, f"{name}/{path}/{o.test_name}")
        for kind in ("zero", "one", "counter"):
            out = ss.run_tests(ss.bits_from_uint32(ss.control_words(kind, (10 << 20) // 4)))
            assert min(o.p_value for o in out) < 1e-6, kind
        note["detail"] = f"{len(C8_SETS)} sets, smallest two-sided p {worst[0]:.4f} at {worst[1]}"


def test_c9_dimension_gaps():
    with criterion(9, "equidist on the smallest 32-bit set") as note:
        name = min((n for n in TABULATED if lookup(n).w == 32), key=lambda n: lookup(n).p)
        prm = lookup(name)
        t0 = time.perf_counter()
        reports = {mode: full_report(prm, mode) for mode in ("none", "linear")}
        el = time.perf_counter() - t0
        assert el < 600, f"{el:.0f}s"
        for mode, rep in reports.items():
            assert rep.per_v[0].k_v == prm.p, mode
            assert all(r.k_v * r.v <= prm.p for r in rep.per_v), mode
            if name in PUBLISHED_GAPS:
                assert rep.gaps() == PUBLISHED_GAPS[name][mode], mode
        how = "published gaps" if name in PUBLISHED_GAPS else "k(1)=p and k_v*v<=p; no published gaps transcribed"
        note["detail"] = (
            f"{name} total defect none={reports['none'].total_defect} "
            f"linear={reports['linear'].total_defect}; {how}"
        )


def test_c10_determinism():
    with criterion(10, "gen output byte-identical across runs and matches frozen checksums") as note:
        for (name, seed, mode, path), want in FROZEN_GEN.items():
            args = ["gen", "--param", name, "--seed", str(seed), "--mode", mode, "--path", path]
            args += ["--count", "100000", "--format", "raw"]
            a, b = mxg(*args), mxg(*args)
            assert a.returncode == 0 and a.stdout == b.stdout, name
            got = hashlib.sha256(a.stdout).hexdigest()
            assert got == want, f"{name}/{mode}/{path} sha256 {got[:16]} != frozen {want[:16]}"
        # in-process block generation agrees with the CLI bytes
        st_ = engine.seed(lookup("mxg32-521"), 5489)
        blk = st_.generate(100_000, "weyl").astype("<u4").tobytes()
        assert hashlib.sha256(blk).hexdigest() == FROZEN_GEN[("mxg32-521", 5489, "weyl", "raw-words")]
        note["detail"] = f"{len(FROZEN_GEN)} configurations"

