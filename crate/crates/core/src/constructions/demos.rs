//! End-to-end pipelines over the ω-tower.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::space::Str;
use crate::trees::is_downward_closed;

use super::tower::{path_tree_index, Tower, TowerConfig, TowerError};

/// Printed with every report that involves the two-point demo.
pub const INCOMPARABILITY_CAVEAT: &str = "CAVEAT: the input points are computable stand-ins; arithmetical incomparability of the image points is NOT verified and is not claimed.";

/// Printed with every tower report.
pub const STAGE_CAVEAT: &str =
    "CAVEAT: all maps are finite-stage approximations; only their limits carry the guarantees of the constructions.";

fn zeros(n: usize) -> Str {
    Str::from(vec![0; n])
}

fn common_prefix(a: &Str, b: &Str) -> usize {
    a.entries().iter().zip(b.entries()).take_while(|(x, y)| x == y).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CoherenceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `H^t_n = H^s_n ∘ H^t_s` for `n < s < t ≤ levels`, identity below `n`
/// for `H^t_n` and `H^ω_n`, and `H^ω_n(σ)↾n = σ↾n`, on the given strings.
pub fn coherence_check(tower: &Tower, strings: &[Str]) -> Result<CoherenceReport, TowerError> {
    let levels = tower.config().levels;
    let mut report = CoherenceReport { checked: 0, failures: Vec::new() };
    for s in strings {
        for t in 0..=levels {
            for n in 0..=t {
                let full = tower.chain_apply(n, t, s)?;
                report.checked += 1;
                if s.len() <= n && full != *s {
                    report.failures.push(format!("H^{t}_{n}({s}) = {full} is not the identity"));
                }
                for mid in n + 1..t {
                    let split = tower.chain_apply(n, mid, &tower.chain_apply(mid, t, s)?)?;
                    report.checked += 1;
                    if split != full {
                        report
                            .failures
                            .push(format!("H^{t}_{n}({s}) = {full} but H^{mid}_{n}∘H^{t}_{mid} gives {split}"));
                    }
                }
            }
        }
        for n in 0..=levels {
            let image = tower.omega_apply(n, s)?;
            report.checked += 1;
            let m = n.min(s.len());
            if image.prefix(m.min(image.len())) != s.prefix(m) {
                report.failures.push(format!("H^ω_{n}({s}) = {image} does not start with {}", s.prefix(m)));
            }
            if s.len() <= n && image != *s {
                report.failures.push(format!("H^ω_{n}({s}) = {image} is not the identity"));
            }
        }
    }
    Ok(report)
}

/// Images of candidate strings around `images`, tested for membership in
/// `P_0` and checked for closure under prefixes.
fn truncation_closed(tower: &Arc<Tower>, images: &[Str], depth: usize) -> Result<(usize, bool), TowerError> {
    let p0 = tower.image();
    let mut candidates = BTreeSet::new();
    for img in images {
        for k in 0..=depth.min(img.len()) {
            let p = img.prefix(k);
            if k > 0 {
                let mut bumped = p.entries().to_vec();
                *bumped.last_mut().expect("k > 0") += 1;
                candidates.insert(Str::from(bumped));
            }
            candidates.insert(p);
        }
    }
    let mut members = BTreeSet::new();
    for c in candidates {
        if p0.contains(&c, tower.config().stage).map_err(|e| TowerError::Treemap(e.into()))? {
            members.insert(c);
        }
    }
    Ok((members.len(), is_downward_closed(&members)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub j: usize,
    /// `0^j⌢⟨1⟩`.
    pub point: Str,
    pub image: Str,
    /// Length of the common prefix with the image of the zero point.
    pub agreement: usize,
    pub distinct: bool,
}

#[derive(Debug, Clone)]
pub struct McLaughlinReport {
    pub config: TowerConfig,
    pub e_star: crate::nat::Nat,
    pub overhead: u64,
    /// `H^ω_0(0^d)`.
    pub z0: Str,
    /// `H^ω_0(0^n)` for `n ≤ levels`: the per-level view of the zero point.
    pub level_images: Vec<(usize, Str)>,
    pub witnesses: Vec<Witness>,
    pub truncation_size: usize,
    pub downward_closed: bool,
    pub samples: Vec<(Str, Str)>,
    pub injective: bool,
    pub coherence: CoherenceReport,
    pub caveats: Vec<String>,
}

/// The pipeline on the tree of points with at most one nonzero entry, whose
/// zero point is a limit of the others.
pub fn mclaughlin_demo(cfg: TowerConfig, seed: u64) -> Result<McLaughlinReport, TowerError> {
    let tower = Tower::new(cfg.clone())?;
    let d = cfg.depth;
    let z0 = tower.omega_apply(0, &zeros(d))?;
    let z_long = tower.omega_apply(0, &zeros(d + 1))?;

    let mut witnesses = Vec::new();
    for j in 0..=d {
        let mut point = zeros(j);
        point.push(1);
        let image = tower.omega_apply(0, &point)?;
        let agreement = common_prefix(&image, &z_long);
        witnesses.push(Witness { j, point, distinct: !image.is_prefix_of(&z_long), image, agreement });
    }

    // Sample distinct points of the tree, distinct already below depth d.
    let mut pool = vec![zeros(d)];
    let top = (cfg.branching.saturating_sub(1)).max(10usize.div_ceil(d.max(1)) as u64);
    for j in 0..d {
        for k in 1..=top {
            let mut p = zeros(d);
            let mut v = p.entries().to_vec();
            v[j] = k;
            p = Str::from(v);
            pool.push(p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(10);
    let mut samples = Vec::new();
    for p in &pool {
        samples.push((p.clone(), tower.omega_apply(0, p)?));
    }
    let injective =
        samples.iter().enumerate().all(|(a, (_, x))| samples.iter().skip(a + 1).all(|(_, y)| !x.comparable(y)));

    let mut images: Vec<Str> = witnesses.iter().map(|w| w.image.clone()).collect();
    images.push(z_long.clone());
    let (truncation_size, downward_closed) = truncation_closed(&tower, &images, d)?;

    let base: Vec<Str> = tower
        .config()
        .base_tree()
        .restrict_to(d, cfg.branching, cfg.stage)
        .map_err(|e| TowerError::Treemap(e.into()))?
        .nodes()
        .cloned()
        .collect();
    let coherence = coherence_check(&tower, &base)?;
    let level_images =
        (0..=cfg.levels).map(|n| Ok((n, tower.omega_apply(0, &zeros(n))?))).collect::<Result<_, TowerError>>()?;

    Ok(McLaughlinReport {
        e_star: tower.index().clone(),
        overhead: tower.fixed_point().overhead,
        config: cfg,
        z0,
        level_images,
        witnesses,
        truncation_size,
        downward_closed,
        samples,
        injective,
        coherence,
        caveats: vec![STAGE_CAVEAT.to_string()],
    })
}

/// Two computable stand-in points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MockPointPair {
    /// Eventually-zero points, given by their nonzero prefixes.
    pub x: Str,
    pub y: Str,
}

#[derive(Debug, Clone)]
pub struct IncomparableReport {
    pub config: TowerConfig,
    pub e_star: crate::nat::Nat,
    pub x_image: Str,
    pub y_image: Str,
    /// Length of the common prefix of the two images.
    pub split: usize,
    /// Images of all depth-`d` members of the base tree.
    pub paths: Vec<Str>,
    pub two_paths: bool,
    /// Each image is the only path through the subtree above its witness prefix.
    pub isolated: bool,
    pub injective: bool,
    pub truncation_size: usize,
    pub downward_closed: bool,
    pub caveats: Vec<String>,
}

/// The pipeline on the tree whose only paths are the two points.
pub fn incomparable_demo(pair: &MockPointPair, mut cfg: TowerConfig) -> Result<IncomparableReport, TowerError> {
    let d = cfg.depth;
    let x = pair.x.prefix(d.min(pair.x.len())).concat(&zeros(d.saturating_sub(pair.x.len())));
    let y = pair.y.prefix(d.min(pair.y.len())).concat(&zeros(d.saturating_sub(pair.y.len())));
    cfg.omega_tree = path_tree_index(&[x.clone(), y.clone()]);
    let widest = x.entries().iter().chain(y.entries()).max().copied().unwrap_or(0) + 1;
    cfg.branching = cfg.branching.max(widest);
    let tower = Tower::new(cfg.clone())?;

    let x_image = tower.omega_apply(0, &x)?;
    let y_image = tower.omega_apply(0, &y)?;
    let split = common_prefix(&x_image, &y_image);

    let members =
        tower.config().base_tree().level(d, cfg.branching, cfg.stage).map_err(|e| TowerError::Treemap(e.into()))?;
    let mut paths = Vec::new();
    for m in &members {
        paths.push(tower.omega_apply(0, m)?);
    }
    paths.sort();
    paths.dedup();
    let two_paths = paths.len() == 2 && !paths[0].comparable(&paths[1]);
    let isolated = [&x_image, &y_image].iter().all(|img| {
        let witness = img.prefix((split + 1).min(img.len()));
        paths.iter().filter(|p| witness.is_prefix_of(p)).count() == 1
    });
    let injective = x == y || !x_image.comparable(&y_image);
    let (truncation_size, downward_closed) = truncation_closed(&tower, &[x_image.clone(), y_image.clone()], d)?;

    Ok(IncomparableReport {
        e_star: tower.index().clone(),
        config: cfg,
        x_image,
        y_image,
        split,
        paths,
        two_paths,
        isolated,
        injective,
        truncation_size,
        downward_closed,
        caveats: vec![INCOMPARABILITY_CAVEAT.to_string(), STAGE_CAVEAT.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::tower::one_nonzero_index;

    #[test]
    fn swapping_the_pair_swaps_the_images() {
        let cfg = TowerConfig { stage: 2_000, ..TowerConfig::new(one_nonzero_index()) };
        let pair = MockPointPair { x: Str::from(vec![1, 0, 2]), y: Str::from(vec![0, 1]) };
        let swapped = MockPointPair { x: pair.y.clone(), y: pair.x.clone() };
        let a = incomparable_demo(&pair, cfg.clone()).unwrap();
        let b = incomparable_demo(&swapped, cfg).unwrap();
        assert_eq!(a.x_image, b.y_image);
        assert_eq!(a.y_image, b.x_image);
        assert!(a.two_paths && a.isolated && a.injective && a.downward_closed);
    }
}
