//! Acceptance criteria, each checked against an oracle written here rather
//! than taken from the library. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use jump_tower::constructions::demos::{incomparable_demo, mclaughlin_demo, INCOMPARABILITY_CAVEAT};
use jump_tower::constructions::friedberg::{friedberg_decode, friedberg_treemap, jump_predict, Friedberg};
use jump_tower::constructions::indices::k_program;
use jump_tower::constructions::tower::{one_nonzero_index, Tower, TowerConfig};
use jump_tower::harness::fixtures;
use jump_tower::harness::report::Report;
use jump_tower::machine::{fixed_point, native_index, run, smn, Native, Oracle};
use jump_tower::nat::{pair, unpair, Nat};
use jump_tower::space::{str_code, str_decode, Str};
use jump_tower::treemaps::{image_tree, TreemapHandle};
use jump_tower::trees::{corec_to_rec_tree, ExplicitTree, TreeHandle};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 10_000;

/// Outcome of one criterion: a summary, or the first failure.
type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s(v: &[u64]) -> Str {
    Str::from(v.to_vec())
}

/// Every string of length at most `depth` with entries below `b`.
fn all_strings(depth: usize, b: u64) -> Vec<Str> {
    let mut out = vec![Str::empty()];
    let mut layer = vec![Vec::<u64>::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &layer {
            for i in 0..b {
                let mut w = v.clone();
                w.push(i);
                next.push(w);
            }
        }
        out.extend(next.iter().map(|w| s(w)));
        layer = next;
    }
    out
}

// Reference coding, straight from the formulas.

fn ref_pair(m: u64, n: u64) -> u64 {
    (m + n) * (m + n + 1) / 2 + n
}

fn ref_unpair(z: u64) -> (u64, u64) {
    let mut w = 0;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let n = z - w * (w + 1) / 2;
    (w - n, n)
}

fn ref_code(v: &[u64]) -> u64 {
    v.iter().fold(0, |c, &x| ref_pair(c, x) + 1)
}

fn ref_decode(mut c: u64) -> Vec<u64> {
    let mut rev = Vec::new();
    while c > 0 {
        let (m, i) = ref_unpair(c - 1);
        rev.push(i);
        c = m;
    }
    rev.reverse();
    rev
}

fn ref_is_prefix(a: &[u64], b: &[u64]) -> bool {
    a.len() <= b.len() && a == &b[..a.len()]
}

// Reference G: scan codes upward from the code of base⌢i.

fn ref_forces(e: u64, tau: &[u64], a: &Oracle) -> bool {
    let o = Oracle::join(s(tau), a.clone());
    run(&Nat::from(e), &o, &Nat::from(e), tau.len() as u64).halted()
}

fn ref_step(base: &[u64], e: u64, i: u64, a: &Oracle, cap: u64) -> Vec<u64> {
    let mut root = base.to_vec();
    root.push(i);
    // Every extension of the root has a larger code, so start there.
    let start = ref_code(&root);
    (start..cap).map(ref_decode).find(|t| ref_is_prefix(&root, t) && ref_forces(e, t, a)).unwrap_or(root)
}

struct RefG {
    a: Oracle,
    cap: u64,
    memo: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl RefG {
    fn image(&mut self, sigma: &[u64]) -> Vec<u64> {
        if sigma.is_empty() {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(sigma) {
            return v.clone();
        }
        let n = sigma.len() - 1;
        let parent = self.image(&sigma[..n]);
        let v = ref_step(&parent, n as u64, sigma[n], &self.a, self.cap);
        self.memo.insert(sigma.to_vec(), v.clone());
        v
    }
}

fn criterion_1() -> Check {
    let a = Oracle::zeros();
    let g = Friedberg::new(a.clone(), CAP);
    let wide = Friedberg::new(a.clone(), 2 * CAP);
    let mut reference = RefG { a: a.clone(), cap: CAP, memo: BTreeMap::new() };
    let region = all_strings(5, 3);
    let mut checked = 0;
    for sigma in &region {
        let img = g.image(sigma);
        let expect = reference.image(sigma.entries());
        ensure(img.entries() == expect.as_slice(), || format!("G({sigma}) = {img}, reference {}", s(&expect)))?;
        ensure(wide.image(sigma) == img, || format!("G({sigma}) changes when the cap doubles"))?;
        for i in 0..3 {
            let child = g.image(&sigma.child(i));
            ensure(img.child(i).is_prefix_of(&child), || format!("law fails at {sigma}⌢{i}: {img} vs {child}"))?;
            checked += 1;
        }
    }
    // Steps whose search is not trivial, against the reference, with oracles.
    let table = Oracle::table(s(&[1, 0, 2]));
    for a in [Oracle::zeros(), table] {
        let g = Friedberg::new(a.clone(), CAP);
        for (name, text) in fixtures::step_programs() {
            let e = fixtures::step_program_index(text);
            for base in all_strings(1, 3) {
                for i in 0..3 {
                    let fast = g.step(&base, e, i);
                    let slow = ref_step(base.entries(), e, i, &a, CAP);
                    ensure(fast.entries() == slow.as_slice(), || {
                        format!("{name}: step({base},{i}) = {fast}, reference {}", s(&slow))
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} law and step checks on {} strings, 0 violations", region.len()))
}

// Image trees from the definition.

fn random_tree(rng: &mut ChaCha8Rng, depth: usize, b: u64) -> Vec<Str> {
    let mut nodes = vec![Str::empty()];
    let mut layer = vec![Str::empty()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &layer {
            for i in 0..b {
                if rng.random_range(0..3) != 0 {
                    next.push(p.child(i));
                }
            }
        }
        nodes.extend(next.iter().cloned());
        layer = next;
    }
    nodes
}

/// A map obeying the treemap law: children's images extend the parent's
/// image plus the entry by up to one random entry.
fn random_map(rng: &mut ChaCha8Rng, nodes: &[Str], b: u64) -> BTreeMap<Str, Str> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by_key(Str::len);
    let mut map: BTreeMap<Str, Str> = BTreeMap::new();
    for n in sorted {
        let mut img =
            if n.is_empty() { Str::empty() } else { map[&n.prefix(n.len() - 1)].child(n.get(n.len() - 1).unwrap()) };
        if rng.random_bool(0.5) {
            img.push(rng.random_range(0..b));
        }
        map.insert(n, img);
    }
    map
}

fn in_image_by_definition(map: &BTreeMap<Str, Str>, tau: &Str) -> bool {
    map.values().any(|img| tau.is_prefix_of(img))
}

fn compare_image(map: &BTreeMap<Str, Str>, queries: &[Str]) -> Result<(), String> {
    let tree = ExplicitTree::new(map.keys().cloned()).map_err(|e| e.to_string())?;
    let handle = TreemapHandle::table(TreeHandle::explicit(tree), map.clone());
    let img = image_tree(&handle, false);
    for tau in queries {
        let got = img.contains(tau, 10).map_err(|e| format!("{tau}: {e}"))?;
        let want = in_image_by_definition(map, tau);
        ensure(got == want, || format!("{tau}: rule says {got}, definition says {want}"))?;
    }
    Ok(())
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let full = all_strings(4, 3);
    let mut exhaustive = 0;
    for _ in 0..3 {
        let map = random_map(&mut rng, &full, 3);
        let mut queries: BTreeSet<Str> = all_strings(4, 3).into_iter().collect();
        for img in map.values() {
            queries.extend(img.prefixes());
            queries.insert(img.child(0));
        }
        let queries: Vec<Str> = queries.into_iter().collect();
        compare_image(&map, &queries)?;
        exhaustive += queries.len();
    }
    for _ in 0..1000 {
        let nodes = random_tree(&mut rng, 4, 3);
        let map = random_map(&mut rng, &nodes, 3);
        let len = rng.random_range(0..=9);
        let tau = if rng.random_bool(0.5) {
            let imgs: Vec<&Str> = map.values().collect();
            let img = imgs[rng.random_range(0..imgs.len())];
            img.prefix(len.min(img.len()))
        } else {
            Str::from((0..len).map(|_| rng.random_range(0..3)).collect::<Vec<_>>())
        };
        compare_image(&map, &[tau])?;
    }
    Ok(format!("{exhaustive} exhaustive queries and 1000 random cases agree"))
}

fn criterion_3() -> Check {
    let points = fixtures::points();
    ensure(points.len() == 10, || format!("{} fixture points", points.len()))?;
    let mut checked = 0;
    for a in [Oracle::zeros(), Oracle::table(s(&[0, 3, 1]))] {
        for (name, x) in &points {
            for n in 0..=6 {
                let p = x.prefix(n).map_err(|e| e.to_string())?;
                let back = friedberg_decode(&friedberg_treemap(&a, &p, CAP), &a, CAP);
                ensure(back == p, || format!("{name}: decode(G({p})) = {back}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} prefixes recovered"))
}

fn criterion_4() -> Check {
    let mut checked = 0;
    for a in [Oracle::zeros(), Oracle::table(s(&[2, 0, 1, 1]))] {
        let g = Friedberg::new(a.clone(), CAP);
        for f in fixtures::jump_programs() {
            for (name, x) in fixtures::points() {
                let predicted = jump_predict(&g, f.index, &x).map_err(|e| e.to_string())?;
                let prefix = x.prefix(f.index as usize + 1).map_err(|e| e.to_string())?;
                let oracle = Oracle::join(g.image(&prefix), a.clone());
                let e = Nat::from(f.index);
                let direct = run(&e, &oracle, &e, 10_000).halted();
                ensure(predicted == direct && direct == f.halts, || {
                    format!("{} on {name}: predicted {predicted}, direct {direct}, proved {}", f.name, f.halts)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} program/point pairs agree with the proved status"))
}

fn random_oracle(rng: &mut ChaCha8Rng) -> Oracle {
    let len = rng.random_range(0..48);
    Oracle::table(Str::from((0..len).map(|_| rng.random_range(0..5)).collect::<Vec<_>>()))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut programs: Vec<Nat> = fixtures::programs().iter().map(|p| p.index()).collect();
    programs.extend(fixtures::jump_programs().iter().map(|f| Nat::from(f.index)));
    for k in 0..100 {
        let e = &programs[rng.random_range(0..programs.len())];
        let (a, b) = (rng.random_range(0..100u64), rng.random_range(0..100u64));
        let oracle = random_oracle(&mut rng);
        let lhs = run(&smn(e, &Nat::from(a)), &oracle, &Nat::from(b), 100_000);
        let rhs = run(e, &oracle, &Nat::from(ref_pair(a, b)), 100_000);
        ensure(lhs == rhs, || format!("s-m-n sample {k}: e={e} a={a} b={b}: {lhs:?} vs {rhs:?}"))?;
    }
    let mut transformers: Vec<Nat> =
        fixtures::programs().iter().map(|p| native_index(Native::Const { value: p.index() })).collect();
    transformers.push(k_program(&one_nonzero_index()));
    let mut halted = 0;
    for k in 0..100 {
        let t = &transformers[rng.random_range(0..transformers.len())];
        let fp = fixed_point(t, 10_000).map_err(|e| e.to_string())?;
        let image = run(t, &Oracle::zeros(), &fp.index, 10_000).output().cloned().ok_or("transformer diverged")?;
        let x = Nat::from(rng.random_range(0..100u64));
        let oracle = random_oracle(&mut rng);
        let direct = run(&image, &oracle, &x, 100_000);
        let via = run(&fp.index, &oracle, &x, 100_000 + fp.overhead);
        ensure(direct.output() == via.output(), || format!("fixed-point sample {k}: {via:?} vs {direct:?}"))?;
        halted += direct.halted() as usize;
    }
    Ok(format!("100 s-m-n and 100 fixed-point samples exact ({halted} halting)"))
}

/// `T_e^A` at a stage, from the definition, with memoised enumeration.
struct RefCorec {
    e: Nat,
    stage: u64,
    enumerated: BTreeMap<Str, bool>,
}

impl RefCorec {
    fn member(&mut self, sigma: &Str) -> bool {
        for p in (0..=sigma.len()).map(|n| sigma.prefix(n)) {
            let (e, stage) = (&self.e, self.stage);
            let hit = *self
                .enumerated
                .entry(p.clone())
                .or_insert_with(|| run(e, &Oracle::zeros(), &str_code(&p), stage).halted());
            if hit {
                return false;
            }
        }
        true
    }

    fn extends(&mut self, sigma: &Str, horizon: usize) -> bool {
        if !self.member(sigma) {
            return false;
        }
        sigma.len() >= horizon || (0..3).any(|i| self.extends(&sigma.child(i), horizon))
    }
}

fn criterion_6() -> Check {
    const STAGE: u64 = 10_000;
    const HORIZON: usize = 10;
    let mut total = 0;
    for (name, e) in fixtures::tree_indices() {
        let mut reference = RefCorec { e: e.clone(), stage: STAGE, enumerated: BTreeMap::new() };
        let want: Vec<Str> =
            all_strings(4, 3).into_iter().filter(|p| p.len() == 4 && reference.extends(p, HORIZON)).collect();
        let got = corec_to_rec_tree(&e, &Oracle::zeros()).surviving(4, HORIZON, 3, STAGE).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{name}: recursive tree keeps {got:?}, co-r.e. tree {want:?}"))?;
        total += want.len();
    }
    Ok(format!("{} fixture trees agree ({total} surviving paths)", fixtures::tree_indices().len()))
}

fn demo_config() -> TowerConfig {
    TowerConfig { levels: 2, stage: 10_000, depth: 4, branching: 3, omega_tree: one_nonzero_index() }
}

fn at_most_one_nonzero(p: &Str) -> bool {
    p.entries().iter().filter(|&&x| x != 0).count() <= 1
}

fn chain(t: &Tower, n: usize, top: usize, rho: &Str) -> Result<Str, String> {
    let mut v = rho.clone();
    for k in (n..top).rev() {
        v = t.level_apply(k, &v).map_err(|e| e.to_string())?;
    }
    Ok(v)
}

fn demo_points() -> Vec<Str> {
    let mut pts = vec![s(&[0, 0, 0, 0])];
    for j in 0..4 {
        let mut v = vec![0; 4];
        v[j] = 1 + j as u64 % 2;
        pts.push(s(&v));
    }
    pts
}

fn criterion_7() -> Check {
    let t = Tower::new(demo_config()).map_err(|e| e.to_string())?;
    let base: Vec<Str> = all_strings(4, 3).into_iter().filter(at_most_one_nonzero).collect();
    let mut checked = 0;
    for rho in &base {
        let via_1 = chain(&t, 0, 1, &chain(&t, 1, 2, rho)?)?;
        let full = chain(&t, 0, 2, rho)?;
        ensure(full == via_1, || format!("H^2_0({rho}) = {full} but H^1_0∘H^2_1 gives {via_1}"))?;
        for n in 0..=2 {
            for top in n..=2 {
                if rho.len() <= n {
                    let img = chain(&t, n, top, rho)?;
                    ensure(img == *rho, || format!("H^{top}_{n}({rho}) = {img}, expected the identity"))?;
                }
            }
        }
        checked += 1;
    }
    for x in demo_points() {
        for n in 0..=2 {
            let xn = t.omega_apply(n, &x).map_err(|e| e.to_string())?;
            ensure(xn.prefix(n) == x.prefix(n), || format!("X_{n} = {xn} does not start with {}", x.prefix(n)))?;
            let down = chain(&t, 0, n, &xn)?;
            let x0 = t.omega_apply(0, &x).map_err(|e| e.to_string())?;
            ensure(down == x0, || format!("H^{n}_0(X_{n}) = {down} but X_0 = {x0}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} coherence checks at depth 4"))
}

fn common_prefix(a: &Str, b: &Str) -> usize {
    a.entries().iter().zip(b.entries()).take_while(|(x, y)| x == y).count()
}

fn criterion_8() -> Check {
    let m = mclaughlin_demo(demo_config(), 8).map_err(|e| e.to_string())?;
    let t = Tower::new(demo_config()).map_err(|e| e.to_string())?;
    let z0 = t.omega_apply(0, &s(&[0, 0, 0, 0])).map_err(|e| e.to_string())?;
    ensure(m.z0 == z0 && z0.len() >= 4, || format!("Z_0 = {}, recomputed {z0}", m.z0))?;
    let mut images = Vec::new();
    for j in 0..=4 {
        let mut p = vec![0; j];
        p.push(1);
        let img = t.omega_apply(0, &s(&p)).map_err(|e| e.to_string())?;
        ensure(common_prefix(&img, &z0) >= j.min(z0.len()), || {
            format!("witness {j}: {img} agrees with Z_0 = {z0} below depth {j}")
        })?;
        let reported = m.witnesses.iter().find(|w| w.j == j).map(|w| &w.image);
        ensure(reported == Some(&img), || format!("witness {j} missing or different in the report"))?;
        images.push(img);
    }
    let deeper = t.omega_apply(0, &s(&[0, 0, 0, 0, 0])).map_err(|e| e.to_string())?;
    for (j, a) in images.iter().enumerate() {
        ensure(!a.comparable(&deeper), || format!("witness {j} lies on the zero path"))?;
        for b in &images[j + 1..] {
            ensure(!a.comparable(b), || format!("witness images {a} and {b} are comparable"))?;
        }
    }
    // Truncation of P_0: members among short strings and the image prefixes.
    let p0 = t.image();
    let mut candidates: BTreeSet<Str> = all_strings(3, 3).into_iter().collect();
    for img in images.iter().chain([&deeper]) {
        candidates.extend(img.prefix(8.min(img.len())).prefixes());
    }
    let mut members = BTreeSet::new();
    for c in candidates {
        if p0.contains(&c, 10_000).map_err(|e| e.to_string())? {
            members.insert(c);
        }
    }
    let closed = members.iter().all(|p| p.is_empty() || members.contains(&p.prefix(p.len() - 1)));
    ensure(closed && m.downward_closed, || "truncation is not downward closed".to_string())?;
    ensure(m.samples.len() == 10, || format!("{} samples", m.samples.len()))?;
    let points: BTreeSet<&Str> = m.samples.iter().map(|(p, _)| p).collect();
    ensure(points.len() == 10, || "sampled points are not distinct".to_string())?;
    for (i, (p, img)) in m.samples.iter().enumerate() {
        let again = t.omega_apply(0, p).map_err(|e| e.to_string())?;
        ensure(again == *img, || format!("H^ω_0({p}) = {again}, report says {img}"))?;
        for (q, other) in &m.samples[i + 1..] {
            ensure(!img.comparable(other), || format!("H^ω_0 identifies {p} and {q}"))?;
        }
    }
    Ok(format!("Z_0 = {z0}; 5 witnesses; {} truncation members closed; injective on 10 samples", members.len()))
}

fn criterion_9() -> Check {
    let mut out = Vec::new();
    for (name, pair) in fixtures::mock_pairs() {
        let m = incomparable_demo(&pair, demo_config()).map_err(|e| e.to_string())?;
        let t = Tower::new(m.config.clone()).map_err(|e| e.to_string())?;
        let pad = |v: &Str| v.concat(&Str::from(vec![0; 4usize.saturating_sub(v.len())])).prefix(4);
        let x = t.omega_apply(0, &pad(&pair.x)).map_err(|e| e.to_string())?;
        let y = t.omega_apply(0, &pad(&pair.y)).map_err(|e| e.to_string())?;
        ensure(x == m.x_image && y == m.y_image, || format!("{name}: images differ from the report"))?;
        ensure(x != y && !x.comparable(&y), || format!("{name}: images {x} and {y} are comparable"))?;
        ensure(m.paths.len() == 2 && m.paths.contains(&x) && m.paths.contains(&y), || {
            format!("{name}: paths {:?}", m.paths)
        })?;
        ensure(m.two_paths && m.isolated, || format!("{name}: not two isolated paths"))?;
        let text = Report::from(&m).to_string();
        ensure(text.contains("[caveats]") && text.contains(INCOMPARABILITY_CAVEAT), || {
            format!("{name}: caveat banner missing")
        })?;
        out.push(format!("{name} splits at {}", common_prefix(&x, &y)));
    }
    Ok(format!("{}; caveat banner present", out.join(", ")))
}

fn criterion_10() -> Check {
    for m in 0..200u64 {
        for n in 0..200u64 {
            let z = pair(m, n).to_u64().ok_or("pair overflow")?;
            ensure(z == ref_pair(m, n) && unpair(z) == (m, n) && m <= z && n <= z, || format!("pair({m},{n}) = {z}"))?;
        }
    }
    let mut codes = std::collections::HashSet::new();
    let mut count = 0;
    for len in 0..6 {
        for p in all_strings(len, 6).into_iter().filter(|p| p.len() == len) {
            let c = str_code(&p);
            ensure(c == Nat::from(ref_code(p.entries())), || format!("code of {p} is {c}"))?;
            ensure(str_decode(&c).as_ref() == Some(&p), || format!("decode(code {p}) differs"))?;
            ensure(codes.insert(c.clone()), || format!("code {c} repeats"))?;
            count += 1;
        }
    }
    for c in 0..100_000u64 {
        let p = str_decode(&Nat::from(c)).ok_or("undecodable")?;
        ensure(str_code(&p) == Nat::from(c), || format!("code {c} is not onto"))?;
    }
    Ok(format!("40000 pairs; {count} strings coded injectively; codes below 100000 onto"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("treemap law for G", criterion_1),
        ("image-tree equivalence", criterion_2),
        ("decoding G", criterion_3),
        ("jump prediction", criterion_4),
        ("s-m-n and fixed points", criterion_5),
        ("co-r.e. to recursive trees", criterion_6),
        ("omega-tower coherence", criterion_7),
        ("zero-point limit demo", criterion_8),
        ("two-point demo", criterion_9),
        ("coding", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
