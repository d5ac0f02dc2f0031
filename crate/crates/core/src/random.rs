//! Seeded random generators for maps, objects and bispans.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bispan::Bispan;
use crate::context::{orbits, Ambient, Mor};
use crate::finset::{FinMap, FinSet};
use crate::gset::{GSet, Group};

/// The generator used by every randomized check, so that a seed fixes a run.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random function `dom -> cod`; `None` if `cod` is empty and
/// `dom` is not.
pub fn random_finmap<R: Rng>(rng: &mut R, dom: usize, cod: usize) -> Option<FinMap> {
    if cod == 0 && dom > 0 {
        return None;
    }
    let map = (0..dom).map(|_| rng.gen_range(0..cod)).collect();
    Mor::new(FinSet::new(dom), FinSet::new(cod), map).ok()
}

/// A random G-set of at most `max_size` points, built orbit by orbit.
pub fn random_gset<R: Rng>(rng: &mut R, group: &Arc<Group>, max_size: usize) -> GSet {
    let target = rng.gen_range(0..=max_size);
    let mut stabs = Vec::new();
    let mut size = 0;
    loop {
        let fitting: Vec<_> =
            group.subgroups().iter().filter(|h| size + group.order() / h.order() <= target).collect();
        if fitting.is_empty() {
            break;
        }
        let h = *fitting.choose(rng).expect("nonempty");
        size += group.order() / h.order();
        stabs.push(h.clone());
        if rng.gen_bool(0.3) {
            break;
        }
    }
    GSet::sum_of_orbits(group, &stabs)
}

/// A random equivariant map: each orbit representative goes to a random
/// point whose stabilizer contains its own. `None` if some orbit has no
/// admissible image.
pub fn random_equivariant_map<O: Ambient, R: Rng>(rng: &mut R, dom: &O, cod: &O) -> Option<Mor<O>> {
    let o = orbits(dom);
    let mut map = vec![0; dom.len()];
    for (i, &rep) in o.reps.iter().enumerate() {
        let fixing: Vec<usize> = (0..dom.group_order()).filter(|&g| dom.act(g, rep) == rep).collect();
        let targets: Vec<usize> = (0..cod.len()).filter(|&y| fixing.iter().all(|&g| cod.act(g, y) == y)).collect();
        let &y = targets.choose(rng)?;
        for &x in &o.members[i] {
            map[x] = cod.act(o.transporter[x], y);
        }
    }
    Mor::new(dom.clone(), cod.clone(), map).ok()
}

/// A random bispan `src -> tgt` whose middle objects come from `object`.
/// Retries up to `attempts` times when no equivariant legs exist.
pub fn random_bispan<O: Ambient, R: Rng>(
    rng: &mut R,
    src: &O,
    tgt: &O,
    object: &mut dyn FnMut(&mut R) -> O,
    attempts: usize,
) -> Option<Bispan<O>> {
    for _ in 0..attempts {
        let b = object(rng);
        let Some(l) = random_equivariant_map(rng, &b, tgt) else { continue };
        let e = object(rng);
        let Some(f) = random_equivariant_map(rng, &e, &b) else { continue };
        let Some(p) = random_equivariant_map(rng, &e, src) else { continue };
        if let Ok(bispan) = Bispan::new(p, f, l) {
            return Some(bispan);
        }
    }
    None
}

/// A random bispan of finite sets with every carrier of size at most `max`.
pub fn random_finset_bispan<R: Rng>(rng: &mut R, max: usize) -> Bispan<FinSet> {
    let src = FinSet::new(rng.gen_range(0..=max));
    let tgt = FinSet::new(rng.gen_range(0..=max));
    random_finset_bispan_between(rng, &src, &tgt, max)
}

/// A random bispan of finite sets between fixed endpoints.
pub fn random_finset_bispan_between<R: Rng>(rng: &mut R, src: &FinSet, tgt: &FinSet, max: usize) -> Bispan<FinSet> {
    let b_max = if tgt.is_empty() { 0 } else { max };
    let b = FinSet::new(rng.gen_range(0..=b_max));
    let e_max = if b.is_empty() || src.is_empty() { 0 } else { max };
    let e = FinSet::new(rng.gen_range(0..=e_max));
    let l = random_equivariant_map(rng, &b, tgt).expect("target nonempty or b empty");
    let f = random_equivariant_map(rng, &e, &b).expect("b nonempty or e empty");
    let p = random_equivariant_map(rng, &e, src).expect("src nonempty or e empty");
    Bispan::new(p, f, l).expect("all maps carry both flags")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a: Vec<_> = (0..5).map(|_| random_finset_bispan(&mut rng(7), 4).canonical_form()).collect();
        let b: Vec<_> = (0..5).map(|_| random_finset_bispan(&mut rng(7), 4).canonical_form()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn random_gsets_respect_bounds_and_maps_are_equivariant() {
        let group = Arc::new(Group::symmetric(3));
        let mut r = rng(1);
        for _ in 0..50 {
            let x = random_gset(&mut r, &group, 6);
            assert!(x.len() <= 6);
            let y = random_gset(&mut r, &group, 6);
            if let Some(m) = random_equivariant_map(&mut r, &x, &y) {
                assert!(Mor::new(x.clone(), y.clone(), m.map().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn random_gset_bispans_exist() {
        let group = Arc::new(Group::cyclic(2));
        let mut r = rng(3);
        let pt = GSet::point(&group);
        let b = random_bispan(&mut r, &pt, &pt, &mut |r| random_gset(r, &group, 4), 20).unwrap();
        assert_eq!(b.src().len(), 1);
    }
}
