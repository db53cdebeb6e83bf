//! Assembly of the triple system: orbits of `h -> -2h` on the complement
//! `H`, the two-coloring derived from them, and the three block families.
//!
//! For a group spec with components `[5, p1, ..., pt]` the system on
//! `v = |G| + 2` points consists of:
//!
//! * the zero-sum triples of `G`, minus the two that lie inside `Z5 x {0}`;
//! * one triple `{-g, 2g, inf}` per element `g` outside `Z5 x {0}`, where
//!   the extra point is picked by the coloring of the `H`-part of `g`;
//! * a fixed 7-point system on `Z5 x {0}` and the two extra points, chosen
//!   so that its one triple through both extra points has nonzero weight.
//!
//! The coloring gives color 1 to even powers of `h -> -2h` applied to each
//! orbit representative and color 2 to odd powers. Representatives are
//! chosen per orbit pair `{Y, -Y}` so that negation swaps nothing: the
//! least-index element of the pair represents its own orbit and its negation
//! represents the partner.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("orbit of size {size} cannot be two-colored alternately")]
    OddOrbit { size: usize },
    #[error("triple {triple:?} is not strictly ascending within 0..{v}")]
    BadTriple { triple: [u32; 3], v: u32 },
    #[error("{triples} triples but {roles} role tags")]
    RoleCountMismatch { triples: usize, roles: usize },
    #[error("color table entry ({h_index}, {color}) is out of range")]
    BadColorEntry { h_index: u64, color: u8 },
    #[error("color table must assign every nonzero H-index below {h_order} exactly once")]
    ColorDomainMismatch { h_order: u64 },
    #[error("order {0} exceeds the supported point range")]
    OrderTooLarge(u64),
}

/// One orbit of `h -> -2h` acting on the nonzero elements of `H`, embedded
/// in `G` with first coordinate 0. Elements are listed in orbit order
/// starting from the member with least index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaOrbit {
    elements: Vec<GroupElement>,
}

impl ThetaOrbit {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Orbits of `h -> -2h` on `H \ {0}`, ordered by their least element index.
///
/// Every orbit size is the lcm of `ord_p(-2)` over the components where the
/// starting element is nonzero, so for admissible orders all sizes are
/// divisible by 4.
pub fn theta_orbits(spec: &GroupSpec) -> Vec<ThetaOrbit> {
    let h_order = spec.h_order();
    let mut seen = vec![false; h_order as usize];
    seen[0] = true;
    let mut orbits = Vec::new();
    for start in 1..h_order {
        if seen[start as usize] {
            continue;
        }
        let mut elements = Vec::new();
        let mut h = spec.from_h_index(start).expect("index in range");
        loop {
            seen[spec.h_index(&h) as usize] = true;
            elements.push(h.clone());
            h = spec.double_neg(&h);
            if spec.h_index(&h) == start {
                break;
            }
        }
        orbits.push(ThetaOrbit { elements });
    }
    orbits
}

/// Picks one representative per orbit, negation-consistently: within each
/// orbit pair `{Y, -Y}` the element of least index represents its orbit and
/// its negation represents the partner, so `rep(-Y) = -rep(Y)` always holds.
/// Self-paired orbits get their least-index element.
///
/// Returns one representative per orbit, parallel to `orbits`.
pub fn choose_representatives(spec: &GroupSpec, orbits: &[ThetaOrbit]) -> Vec<GroupElement> {
    let mut orbit_of: HashMap<u64, usize> = HashMap::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        for h in orbit.elements() {
            orbit_of.insert(spec.h_index(h), oi);
        }
    }
    let mut reps: Vec<Option<GroupElement>> = vec![None; orbits.len()];
    for (oi, orbit) in orbits.iter().enumerate() {
        if reps[oi].is_some() {
            continue;
        }
        let root = &orbit.elements()[0];
        let neg = spec.neg(root);
        let partner = orbit_of[&spec.h_index(&neg)];
        reps[oi] = Some(root.clone());
        if partner != oi {
            debug_assert!(partner > oi, "orbits are ordered by least element");
            reps[partner] = Some(neg);
        }
    }
    reps.into_iter()
        .map(|r| r.expect("every orbit is in exactly one pair"))
        .collect()
}

/// The two-coloring of `H \ {0}`: color 1 on even powers of `h -> -2h`
/// applied to each orbit representative, color 2 on odd powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorTable {
    /// Indexed by `H`-index; entry 0 is unused and stays 0.
    colors: Vec<u8>,
}

impl ColorTable {
    /// Rebuilds a table from explicit `(h_index, color)` entries, as read
    /// back from a file. Every nonzero index below `h_order` must appear
    /// exactly once with color 1 or 2.
    pub fn from_entries(h_order: u64, entries: &[(u64, u8)]) -> Result<Self, ConstructError> {
        let mut colors = vec![0u8; h_order as usize];
        for &(h_index, color) in entries {
            if h_index == 0 || h_index >= h_order || !(1..=2).contains(&color) {
                return Err(ConstructError::BadColorEntry { h_index, color });
            }
            if colors[h_index as usize] != 0 {
                return Err(ConstructError::ColorDomainMismatch { h_order });
            }
            colors[h_index as usize] = color;
        }
        if colors[1..].contains(&0) {
            return Err(ConstructError::ColorDomainMismatch { h_order });
        }
        Ok(ColorTable { colors })
    }

    /// Color of a nonzero `H`-index, or `None` outside the domain.
    pub fn color_of_h(&self, h_index: u64) -> Option<u8> {
        match self.colors.get(h_index as usize) {
            Some(&c) if c != 0 => Some(c),
            _ => None,
        }
    }

    /// Color of a group element, determined by its `H`-part; `None` for
    /// elements of `Z5 x {0}`.
    pub fn color_of(&self, spec: &GroupSpec, g: &GroupElement) -> Option<u8> {
        self.color_of_h(spec.h_index(g))
    }

    /// The domain size `|H|`.
    pub fn h_order(&self) -> u64 {
        self.colors.len() as u64
    }

    /// All `(h_index, color)` entries, ascending by index.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64, c))
    }

    /// The `H`-indices with color 1, ascending.
    pub fn class_one(&self) -> Vec<u64> {
        self.entries()
            .filter(|&(_, c)| c == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// The `H`-indices with color 2, ascending.
    pub fn class_two(&self) -> Vec<u64> {
        self.entries()
            .filter(|&(_, c)| c == 2)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Builds the coloring from orbits and their representatives. Fails if some
/// orbit has odd size, since the two colors must alternate along each orbit.
pub fn color_table(
    spec: &GroupSpec,
    orbits: &[ThetaOrbit],
    reps: &[GroupElement],
) -> Result<ColorTable, ConstructError> {
    assert_eq!(orbits.len(), reps.len(), "one representative per orbit");
    let mut colors = vec![0u8; spec.h_order() as usize];
    for (orbit, rep) in orbits.iter().zip(reps) {
        if orbit.len() % 2 != 0 {
            return Err(ConstructError::OddOrbit { size: orbit.len() });
        }
        let mut h = rep.clone();
        for step in 0..orbit.len() {
            let slot = &mut colors[spec.h_index(&h) as usize];
            debug_assert_eq!(*slot, 0, "orbits are disjoint");
            *slot = 1 + (step % 2) as u8;
            h = spec.double_neg(&h);
        }
        debug_assert_eq!(&h, rep, "walk returns to the representative");
    }
    Ok(ColorTable { colors })
}

/// Whether consecutive weights along the deficiency cycles always get
/// different colors: `color(h) != color(-2h)` for every nonzero `h`.
pub fn gamma_alternates(spec: &GroupSpec, colors: &ColorTable) -> bool {
    (1..spec.h_order()).all(|i| {
        let h = spec.from_h_index(i).expect("index in range");
        let th = spec.h_index(&spec.double_neg(&h));
        match (colors.color_of_h(i), colors.color_of_h(th)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    })
}

/// Whether negation preserves color: `color(h) == color(-h)` for every
/// nonzero `h`. Together with alternation this is what the extra-point
/// bookkeeping needs from the coloring.
pub fn gamma_negation_symmetric(spec: &GroupSpec, colors: &ColorTable) -> bool {
    (1..spec.h_order()).all(|i| {
        let h = spec.from_h_index(i).expect("index in range");
        let ni = spec.h_index(&spec.neg(&h));
        colors.color_of_h(i).is_some() && colors.color_of_h(i) == colors.color_of_h(ni)
    })
}

/// Roles record which family a triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    ZeroSum,
    Infinity,
    SevenPoint,
    Plain,
}

impl Role {
    pub fn tag(self) -> &'static str {
        match self {
            Role::ZeroSum => "b0",
            Role::Infinity => "binf",
            Role::SevenPoint => "bstar",
            Role::Plain => "plain",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Role> {
        match tag {
            "b0" => Some(Role::ZeroSum),
            "binf" => Some(Role::Infinity),
            "bstar" => Some(Role::SevenPoint),
            "plain" => Some(Role::Plain),
            _ => None,
        }
    }
}

/// Per-family triple counts of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoleCounts {
    pub zero_sum: usize,
    pub infinity: usize,
    pub seven_point: usize,
    pub plain: usize,
}

/// A block set on points `0..v`, kept sorted lexicographically with each
/// triple strictly ascending. Duplicate triples are representable; whether
/// they are acceptable is the verifier's business, not the container's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    v: u32,
    triples: Vec<[u32; 3]>,
    roles: Vec<Role>,
    spec: Option<GroupSpec>,
}

impl TripleSystem {
    /// Wraps triples with explicit roles. Each triple must be strictly
    /// ascending with all points below `v`; the list is sorted, carrying
    /// roles along.
    pub fn new(
        v: u32,
        triples: Vec<[u32; 3]>,
        roles: Vec<Role>,
        spec: Option<GroupSpec>,
    ) -> Result<Self, ConstructError> {
        if triples.len() != roles.len() {
            return Err(ConstructError::RoleCountMismatch {
                triples: triples.len(),
                roles: roles.len(),
            });
        }
        for &t in &triples {
            if !(t[0] < t[1] && t[1] < t[2] && t[2] < v) {
                return Err(ConstructError::BadTriple { triple: t, v });
            }
        }
        let mut entries: Vec<([u32; 3], Role)> = triples.into_iter().zip(roles).collect();
        entries.sort_unstable();
        let (triples, roles) = entries.into_iter().unzip();
        Ok(TripleSystem {
            v,
            triples,
            roles,
            spec,
        })
    }

    /// Wraps role-less triples.
    pub fn from_triples(v: u32, triples: Vec<[u32; 3]>) -> Result<Self, ConstructError> {
        let roles = vec![Role::Plain; triples.len()];
        TripleSystem::new(v, triples, roles, None)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn triples(&self) -> &[[u32; 3]] {
        &self.triples
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// The group spec the system was built over, when known.
    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn role_counts(&self) -> RoleCounts {
        let mut counts = RoleCounts::default();
        for role in &self.roles {
            match role {
                Role::ZeroSum => counts.zero_sum += 1,
                Role::Infinity => counts.infinity += 1,
                Role::SevenPoint => counts.seven_point += 1,
                Role::Plain => counts.plain += 1,
            }
        }
        counts
    }

    /// Whether any triple carries a family tag other than `Plain`.
    pub fn has_roles(&self) -> bool {
        self.roles.iter().any(|r| *r != Role::Plain)
    }
}

fn third_point_index(primes: &[u64], a: &[u64], b: &[u64]) -> u64 {
    let mut index = 0;
    for ((&p, &x), &y) in primes.iter().zip(a).zip(b) {
        let c = (2 * p - x - y) % p;
        index = index * p + c;
    }
    index
}

/// The zero-sum triples of `G` as sorted index triples, excluding the two
/// that lie inside `Z5 x {0}`. The result is sorted lexicographically and
/// counts `(|G|^2 - 3|G| + 2) / 6 - 2` triples.
pub fn build_zero_sum_triples(spec: &GroupSpec) -> Vec<[u32; 3]> {
    let n = spec.order();
    let h = spec.h_order();
    let coords: Vec<Vec<u64>> = spec.elements().map(|g| g.coords().to_vec()).collect();
    let mut triples = Vec::with_capacity(((n * n) / 6) as usize);
    for i in 0..n {
        for j in (i + 1)..n {
            let k = third_point_index(spec.primes(), &coords[i as usize], &coords[j as usize]);
            if k > j {
                if i.is_multiple_of(h) && j.is_multiple_of(h) && k.is_multiple_of(h) {
                    continue;
                }
                triples.push([i as u32, j as u32, k as u32]);
            }
        }
    }
    triples
}

/// One triple `{-g, 2g, inf}` per element `g` with nonzero `H`-part, the
/// extra point chosen by the color of `g`. Emitted in index order of `g`;
/// counts `5 (|H| - 1)` triples.
pub fn build_infinity_triples(spec: &GroupSpec, colors: &ColorTable) -> Vec<[u32; 3]> {
    let mut triples = Vec::with_capacity((5 * (spec.h_order() - 1)) as usize);
    for g in spec.elements() {
        if spec.in_base_subgroup(&g) {
            continue;
        }
        let (a, b) = spec.x_edge(&g);
        let color = colors
            .color_of(spec, &g)
            .expect("nonzero H-part is colored");
        let inf = if color == 1 {
            spec.inf1_index()
        } else {
            spec.inf2_index()
        };
        triples.push([a as u32, b as u32, inf as u32]);
    }
    triples
}

/// Labels of the fixed 7-point system on `Z5 x {0}` and the two extra
/// points: 0-4 stand for the subgroup elements `(a, 0)`, 5 and 6 for the
/// extra points. Its unique triple through both extra points is `{1, 5, 6}`,
/// whose weight `(1, 0)` is nonzero; that is what the no-parallel-class
/// argument needs from this family.
const SEVEN_POINT_LABELS: [[u64; 3]; 7] = [
    [1, 2, 4],
    [0, 1, 3],
    [2, 3, 5],
    [0, 4, 5],
    [1, 5, 6],
    [0, 2, 6],
    [3, 4, 6],
];

/// The seven blocks on the subgroup and extra points, sorted
/// lexicographically as index triples.
pub fn build_seven_point_triples(spec: &GroupSpec) -> Vec<[u32; 3]> {
    let h = spec.h_order();
    let mut triples: Vec<[u32; 3]> = SEVEN_POINT_LABELS
        .iter()
        .map(|labels| {
            let mut t = labels.map(|l| match l {
                0..=4 => (l * h) as u32,
                5 => spec.inf1_index() as u32,
                _ => spec.inf2_index() as u32,
            });
            t.sort_unstable();
            t
        })
        .collect();
    triples.sort_unstable();
    triples
}

/// A constructed system together with the data needed to certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructedSystem {
    pub system: TripleSystem,
    pub spec: GroupSpec,
    pub colors: ColorTable,
}

/// Builds the full system for an admissible order `v`. Fails with the
/// admissibility report when `v` is not supported; the output is fully
/// deterministic in `v`.
pub fn construct_sts(v: u64) -> Result<ConstructedSystem, ConstructError> {
    let spec = GroupSpec::from_order(v)?;
    construct_over(&spec)
}

/// Assembles the three families over an explicit group spec, without the
/// admissibility gate of [`construct_sts`]. The result is a pair-exact
/// system whenever the coloring alternates, but the premise suite can only
/// succeed when every orbit size is divisible by 4.
pub fn construct_over(spec: &GroupSpec) -> Result<ConstructedSystem, ConstructError> {
    if spec.v() > u32::MAX as u64 {
        return Err(ConstructError::OrderTooLarge(spec.v()));
    }
    let orbits = theta_orbits(spec);
    let reps = choose_representatives(spec, &orbits);
    let colors = color_table(spec, &orbits, &reps)?;

    let mut triples = Vec::new();
    let mut roles = Vec::new();
    for t in build_zero_sum_triples(spec) {
        triples.push(t);
        roles.push(Role::ZeroSum);
    }
    for t in build_infinity_triples(spec, &colors) {
        triples.push(t);
        roles.push(Role::Infinity);
    }
    for t in build_seven_point_triples(spec) {
        triples.push(t);
        roles.push(Role::SevenPoint);
    }
    let system = TripleSystem::new(spec.v() as u32, triples, roles, Some(spec.clone()))
        .expect("constructed triples are canonical");
    debug_assert_eq!(system.len() as u64 * 6, spec.v() * (spec.v() - 1));
    Ok(ConstructedSystem {
        system,
        spec: spec.clone(),
        colors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn hdx(spec: &GroupSpec, orbit: &ThetaOrbit) -> Vec<u64> {
        orbit.elements().iter().map(|h| spec.h_index(h)).collect()
    }

    #[test]
    fn orbits_over_z5() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let orbits = theta_orbits(&spec);
        assert_eq!(orbits.len(), 1);
        assert_eq!(hdx(&spec, &orbits[0]), vec![1, 3, 4, 2]);
    }

    #[test]
    fn orbits_over_z17() {
        let spec = GroupSpec::new(&[5, 17]).unwrap();
        let orbits = theta_orbits(&spec);
        assert_eq!(orbits.len(), 2);
        assert_eq!(hdx(&spec, &orbits[0]), vec![1, 15, 4, 9, 16, 2, 13, 8]);
        assert_eq!(hdx(&spec, &orbits[1]), vec![3, 11, 12, 10, 14, 6, 5, 7]);
    }

    #[test]
    fn orbit_sizes_divisible_by_four_for_admissible_orders() {
        for v in [27, 87, 147, 627] {
            let spec = GroupSpec::from_order(v).unwrap();
            for orbit in theta_orbits(&spec) {
                assert_eq!(orbit.len() % 4, 0, "v={v} size={}", orbit.len());
            }
        }
    }

    #[test]
    fn orbits_partition_nonzero_h() {
        let spec = GroupSpec::new(&[5, 5, 17]).unwrap();
        let orbits = theta_orbits(&spec);
        let mut seen = BTreeSet::new();
        for orbit in &orbits {
            for h in orbit.elements() {
                assert_eq!(h.coords()[0], 0);
                assert!(seen.insert(spec.h_index(h)));
            }
        }
        assert_eq!(seen.len() as u64, spec.h_order() - 1);
        let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 84);
        // 4 elements with only the Z5 part, 16 with only the Z17 part,
        // 64 with both; orbit sizes are the lcm of the component orders.
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 1);
        assert_eq!(sizes.iter().filter(|&&s| s == 8).count(), 10);
    }

    #[test]
    fn representatives_are_negation_consistent() {
        for primes in [vec![5, 5], vec![5, 17], vec![5, 5, 17], vec![5, 5, 5, 5]] {
            let spec = GroupSpec::new(&primes).unwrap();
            let orbits = theta_orbits(&spec);
            let reps = choose_representatives(&spec, &orbits);
            assert_eq!(reps.len(), orbits.len());
            let mut orbit_of = std::collections::HashMap::new();
            for (oi, orbit) in orbits.iter().enumerate() {
                for h in orbit.elements() {
                    orbit_of.insert(spec.h_index(h), oi);
                }
            }
            for (oi, (orbit, rep)) in orbits.iter().zip(&reps).enumerate() {
                assert!(orbit.elements().contains(rep));
                let neg = spec.neg(rep);
                let partner = orbit_of[&spec.h_index(&neg)];
                if partner != oi {
                    // Paired orbits: the partner's representative is the
                    // negation, so negation maps color classes to themselves.
                    assert_eq!(reps[partner], neg);
                } else {
                    // Self-paired: the negation sits half-way along the
                    // orbit, an even number of steps for admissible specs.
                    let pos = orbit.elements().iter().position(|h| *h == neg).unwrap();
                    let from_rep = orbit.elements().iter().position(|h| h == rep).unwrap();
                    let shift = (pos + orbit.len() - from_rep) % orbit.len();
                    assert_eq!(shift, orbit.len() / 2);
                    assert_eq!(shift % 2, 0);
                }
            }
        }
    }

    #[test]
    fn paired_orbits_exist_over_z5xz17() {
        // Orbits through elements nonzero in both components come in
        // genuine pairs: -h lands in a different orbit than h.
        let spec = GroupSpec::new(&[5, 5, 17]).unwrap();
        let g = spec.element(&[0, 1, 1]);
        let mut in_orbit = BTreeSet::new();
        let mut h = g.clone();
        loop {
            in_orbit.insert(spec.h_index(&h));
            h = spec.double_neg(&h);
            if h == g {
                break;
            }
        }
        assert_eq!(in_orbit.len(), 8);
        assert!(!in_orbit.contains(&spec.h_index(&spec.neg(&g))));
    }

    #[test]
    fn coloring_over_z5() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let orbits = theta_orbits(&spec);
        let reps = choose_representatives(&spec, &orbits);
        let colors = color_table(&spec, &orbits, &reps).unwrap();
        assert_eq!(colors.class_one(), vec![1, 4]);
        assert_eq!(colors.class_two(), vec![2, 3]);
        assert_eq!(colors.color_of_h(0), None);
        assert_eq!(colors.color_of(&spec, &spec.element(&[3, 4])), Some(1));
    }

    #[test]
    fn coloring_classes_over_z17() {
        let spec = GroupSpec::new(&[5, 17]).unwrap();
        let orbits = theta_orbits(&spec);
        let reps = choose_representatives(&spec, &orbits);
        let colors = color_table(&spec, &orbits, &reps).unwrap();
        assert_eq!(colors.class_one(), vec![1, 3, 4, 5, 12, 13, 14, 16]);
        assert_eq!(colors.class_two(), vec![2, 6, 7, 8, 9, 10, 11, 15]);
    }

    #[test]
    fn odd_orbit_is_rejected() {
        // ord_11(-2) = 5, so the orbit of (0, 1) has odd size.
        let spec = GroupSpec::new(&[5, 11]).unwrap();
        let orbits = theta_orbits(&spec);
        let reps = choose_representatives(&spec, &orbits);
        assert_eq!(
            color_table(&spec, &orbits, &reps),
            Err(ConstructError::OddOrbit { size: 5 })
        );
    }

    #[test]
    fn gamma_properties_hold_iff_orbit_sizes_allow() {
        // Over Z17 both properties hold; over Z7 the orbit size is 6, so
        // alternation survives but negation symmetry breaks.
        let good = GroupSpec::new(&[5, 17]).unwrap();
        let orbits = theta_orbits(&good);
        let reps = choose_representatives(&good, &orbits);
        let colors = color_table(&good, &orbits, &reps).unwrap();
        assert!(gamma_alternates(&good, &colors));
        assert!(gamma_negation_symmetric(&good, &colors));

        let bad = GroupSpec::new(&[5, 7]).unwrap();
        let orbits = theta_orbits(&bad);
        let reps = choose_representatives(&bad, &orbits);
        let colors = color_table(&bad, &orbits, &reps).unwrap();
        assert!(gamma_alternates(&bad, &colors));
        assert!(!gamma_negation_symmetric(&bad, &colors));
    }

    #[test]
    fn color_table_round_trips_through_entries() {
        let spec = GroupSpec::new(&[5, 17]).unwrap();
        let orbits = theta_orbits(&spec);
        let reps = choose_representatives(&spec, &orbits);
        let colors = color_table(&spec, &orbits, &reps).unwrap();
        let entries: Vec<(u64, u8)> = colors.entries().collect();
        let rebuilt = ColorTable::from_entries(spec.h_order(), &entries).unwrap();
        assert_eq!(rebuilt, colors);

        assert!(matches!(
            ColorTable::from_entries(17, &[(0, 1)]),
            Err(ConstructError::BadColorEntry { .. })
        ));
        assert!(matches!(
            ColorTable::from_entries(17, &[(1, 3)]),
            Err(ConstructError::BadColorEntry { .. })
        ));
        assert!(matches!(
            ColorTable::from_entries(17, &entries[1..]),
            Err(ConstructError::ColorDomainMismatch { .. })
        ));
    }

    #[test]
    fn zero_sum_triples_over_25_points() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let triples = build_zero_sum_triples(&spec);
        assert_eq!(triples.len(), 90);
        for w in triples.windows(2) {
            assert!(w[0] < w[1], "sorted and duplicate-free");
        }
        for t in &triples {
            let sum = t
                .iter()
                .map(|&i| spec.from_index(i as u64).unwrap())
                .fold(spec.zero(), |acc, g| spec.add(&acc, &g));
            assert_eq!(sum, spec.zero());
        }
        // The two excluded subgroup triples are absent. A zero-sum triple
        // with two subgroup points is subgroup-closed, so after the
        // exclusion every remaining triple has at most one subgroup point.
        assert!(!triples.contains(&[0, 5, 20]));
        assert!(!triples.contains(&[0, 10, 15]));
        assert!(triples
            .iter()
            .all(|t| t.iter().filter(|&&i| i % 5 == 0).count() <= 1));
    }

    #[test]
    fn infinity_triples_over_25_points() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let orbits = theta_orbits(&spec);
        let reps = choose_representatives(&spec, &orbits);
        let colors = color_table(&spec, &orbits, &reps).unwrap();
        let triples = build_infinity_triples(&spec, &colors);
        assert_eq!(triples.len(), 20);
        for t in &triples {
            let infs = t.iter().filter(|&&i| i >= 25).count();
            assert_eq!(infs, 1);
            assert!(t[0] < t[1] && t[1] < t[2]);
        }
        // g = (0,1): edge {-g, 2g} = {(0,4), (0,2)} = indices {4, 2},
        // color of h-index 1 is 1, so the triple is [2, 4, 25].
        assert!(triples.contains(&[2, 4, 25]));
        // g = (0,3): edge {(0,2), (0,1)} hits color 2: [1, 2, 26].
        assert!(triples.contains(&[1, 2, 26]));
    }

    #[test]
    fn seven_point_triples_over_25_points() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let triples = build_seven_point_triples(&spec);
        assert_eq!(
            triples,
            vec![
                [0, 5, 15],
                [0, 10, 26],
                [0, 20, 25],
                [5, 10, 20],
                [5, 25, 26],
                [10, 15, 25],
                [15, 20, 26],
            ]
        );
    }

    #[test]
    fn seven_point_triples_cover_their_21_pairs_once() {
        let spec = GroupSpec::new(&[5, 5]).unwrap();
        let mut pairs = BTreeSet::new();
        for t in build_seven_point_triples(&spec) {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                assert!(pairs.insert((t[a], t[b])));
            }
        }
        assert_eq!(pairs.len(), 21);
    }

    #[test]
    fn constructed_system_for_27_points() {
        let built = construct_sts(27).unwrap();
        assert_eq!(built.system.v(), 27);
        assert_eq!(built.system.len(), 117);
        let counts = built.system.role_counts();
        assert_eq!(counts.zero_sum, 90);
        assert_eq!(counts.infinity, 20);
        assert_eq!(counts.seven_point, 7);
        assert_eq!(counts.plain, 0);
        assert!(built.system.has_roles());
        for w in built.system.triples().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = construct_sts(87).unwrap();
        let b = construct_sts(87).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn construction_rejects_inadmissible_orders() {
        let err = construct_sts(57).unwrap_err();
        assert!(err.to_string().contains("ord_11(-2) = 5"));
        let err = construct_sts(33).unwrap_err();
        assert!(err.to_string().contains("33 mod 30 = 3"));
        assert!(construct_sts(9).is_err());
    }

    #[test]
    fn triple_system_validation() {
        assert!(matches!(
            TripleSystem::from_triples(9, vec![[0, 1, 9]]),
            Err(ConstructError::BadTriple { .. })
        ));
        assert!(matches!(
            TripleSystem::from_triples(9, vec![[1, 1, 2]]),
            Err(ConstructError::BadTriple { .. })
        ));
        assert!(matches!(
            TripleSystem::from_triples(9, vec![[2, 1, 3]]),
            Err(ConstructError::BadTriple { .. })
        ));
        assert!(matches!(
            TripleSystem::new(9, vec![[0, 1, 2]], vec![], None),
            Err(ConstructError::RoleCountMismatch { .. })
        ));
        // Unsorted input is canonicalized; duplicates are representable.
        let sys = TripleSystem::from_triples(9, vec![[3, 4, 5], [0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(sys.triples(), &[[0, 1, 2], [3, 4, 5], [3, 4, 5]]);
        assert_eq!(sys.role_counts().plain, 3);
        assert!(!sys.has_roles());
    }
}
