//! Relation enumeration for the group ring `Z[R^x / R^x2]`.
//!
//! Two families generate the kernel of `Z[R^x/R^x2] -> GW(R)` when the
//! residue field is F2:
//!
//! * even: `<a> + <b> = <a + n^2 b> + <b + m^2 a>` for units `a, b` and
//!   non-units `m, n` with `m a + n b = 0`;
//! * odd: `<a> + <b> + <c> + <d> = <u> + <v> + <w> + <abcd uvw>` with
//!   `u = a + 1/c + 1/d`, `v = 1/a + 1/b + d`, `w = a + b + a^2 c`.
//!
//! Enumeration is deduplicated on the sorted class multisets of both sides,
//! which keeps memory proportional to the number of distinct relations
//! rather than to the number of tuples.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{GwError, Result};
use crate::par::{self, Execution};
use crate::ring::RingSpec;
use crate::square_classes::SquareClassGroup;

/// Exhaustive enumeration is used while the tuple count stays at or below
/// this bound.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 30;

/// Tuples handed to one worker in the sampled regime.
const SAMPLE_CHUNK: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap: u128,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// `LHS - RHS` of a relation, indexed by square class. Sign-normalized so
/// that the first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationVector {
    coords: Vec<i64>,
}

impl RelationVector {
    pub fn from_sides(num_classes: usize, lhs: &[usize], rhs: &[usize]) -> Self {
        let mut coords = vec![0i64; num_classes];
        for &c in lhs {
            coords[c] += 1;
        }
        for &c in rhs {
            coords[c] -= 1;
        }
        RelationVector { coords }
    }

    pub fn from_coords(coords: Vec<i64>) -> Self {
        RelationVector { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn coordinate_sum(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn normalized(mut self) -> Self {
        if let Some(&first) = self.coords.iter().find(|&&x| x != 0) {
            if first < 0 {
                for x in &mut self.coords {
                    *x = -*x;
                }
            }
        }
        self
    }
}

/// The tuple a relation was first produced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Even { a: u64, b: u64, m: u64, n: u64 },
    Odd { a: u64, b: u64, c: u64, d: u64 },
    Hyperbolic,
}

impl Provenance {
    pub fn describe(&self, spec: &RingSpec) -> String {
        let f = |x: &u64| spec.format(*x);
        match self {
            Provenance::Even { a, b, m, n } => format!("EVEN(a={}, b={}, m={}, n={})", f(a), f(b), f(m), f(n)),
            Provenance::Odd { a, b, c, d } => format!("ODD(a={}, b={}, c={}, d={})", f(a), f(b), f(c), f(d)),
            Provenance::Hyperbolic => "HYPERBOLIC".into(),
        }
    }
}

/// The four ring elements on each side of an odd relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddTerms {
    pub lhs: [u64; 4],
    pub rhs: [u64; 4],
}

/// Evaluates the odd relation at `(a, b, c, d)`. Errors if one of the
/// right-hand terms fails to be a unit, which cannot happen for units.
pub fn odd_terms(spec: &RingSpec, a: u64, b: u64, c: u64, d: u64) -> Result<OddTerms> {
    for x in [a, b, c, d] {
        if !spec.is_unit(x) {
            return Err(GwError::NonUnit(spec.format(x)));
        }
    }
    let (ia, ib, ic, id) = (spec.inv_unit(a), spec.inv_unit(b), spec.inv_unit(c), spec.inv_unit(d));
    let u = spec.add(spec.add(a, ic), id);
    let v = spec.add(spec.add(ia, ib), d);
    let w = spec.add(spec.add(a, b), spec.mul(spec.square(a), c));
    for (name, x) in [("u", u), ("v", v), ("w", w)] {
        if !spec.is_unit(x) {
            return Err(GwError::Internal(format!("odd relation term {name} = {} is not a unit", spec.format(x))));
        }
    }
    let abcd = spec.mul(spec.mul(a, b), spec.mul(c, d));
    let t = spec.mul(abcd, spec.mul(spec.mul(u, v), w));
    Ok(OddTerms {
        lhs: [a, b, c, d],
        rhs: [u, v, w, t],
    })
}

/// Evaluates the even relation at units `a, b` and non-unit `m`; returns
/// `(n, a + n^2 b, b + m^2 a)` with `n = -m a / b`.
pub fn even_terms(spec: &RingSpec, a: u64, b: u64, m: u64) -> Result<(u64, u64, u64)> {
    if !spec.is_unit(a) || !spec.is_unit(b) {
        return Err(GwError::NonUnit(format!("{} or {}", spec.format(a), spec.format(b))));
    }
    if spec.is_unit(m) {
        return Err(GwError::Precondition(format!("m = {} must be a non-unit", spec.format(m))));
    }
    let n = spec.neg(spec.mul(spec.mul(m, a), spec.inv_unit(b)));
    let x = spec.add(a, spec.mul(spec.square(n), b));
    let y = spec.add(b, spec.mul(spec.square(m), a));
    if !spec.is_unit(x) || !spec.is_unit(y) || spec.is_unit(n) {
        return Err(GwError::Internal("even relation produced a non-unit".into()));
    }
    Ok((n, x, y))
}

/// Whether a family was enumerated exhaustively or sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyReport {
    pub tuples_total: u128,
    pub tuples_evaluated: u128,
    pub sampled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFamily {
    pub relations: BTreeMap<RelationVector, Provenance>,
    pub report: FamilyReport,
}

const SLOT_BITS: u32 = 16;
const EMPTY_SLOT: u128 = 0xFFFF;

fn pack(lhs: &mut [u32], rhs: &mut [u32]) -> Option<u128> {
    lhs.sort_unstable();
    rhs.sort_unstable();
    if lhs == rhs {
        return None;
    }
    let mut key = 0u128;
    for (i, &c) in lhs.iter().chain(rhs.iter()).enumerate() {
        key |= (c as u128) << (SLOT_BITS * i as u32);
    }
    for i in lhs.len() + rhs.len()..8 {
        key |= EMPTY_SLOT << (SLOT_BITS * i as u32);
    }
    Some(key)
}

fn unpack(key: u128, half: usize) -> (Vec<usize>, Vec<usize>) {
    let slot = |i: usize| ((key >> (SLOT_BITS * i as u32)) & EMPTY_SLOT) as usize;
    ((0..half).map(slot).collect(), (half..2 * half).map(slot).collect())
}

type KeyMap<W> = FxHashMap<u128, W>;

fn merge_min<W: Ord + Copy>(mut a: KeyMap<W>, b: KeyMap<W>) -> KeyMap<W> {
    if a.len() < b.len() {
        return merge_min(b, a);
    }
    for (k, w) in b {
        a.entry(k).and_modify(|cur| *cur = (*cur).min(w)).or_insert(w);
    }
    a
}

fn finish<W: Copy>(
    classes: &SquareClassGroup,
    keys: KeyMap<W>,
    half: usize,
    wrap: impl Fn(W) -> Provenance,
) -> BTreeMap<RelationVector, Provenance> {
    let mut out: BTreeMap<RelationVector, Provenance> = BTreeMap::new();
    for (key, w) in keys {
        let (lhs, rhs) = unpack(key, half);
        let v = RelationVector::from_sides(classes.num_classes(), &lhs, &rhs).normalized();
        if v.is_zero() {
            continue;
        }
        let p = wrap(w);
        out.entry(v).and_modify(|cur| *cur = (*cur).min(p)).or_insert(p);
    }
    out
}

fn check_class_count(classes: &SquareClassGroup) -> Result<()> {
    if classes.num_classes() >= EMPTY_SLOT as usize {
        return Err(GwError::Precondition("too many square classes for relation packing".into()));
    }
    Ok(())
}

/// Precomputed unit inverses and classes, indexed by `unit >> 1`.
struct UnitTables {
    units: Vec<u64>,
    inv: Vec<u64>,
    class: Vec<u32>,
}

impl UnitTables {
    fn new(classes: &SquareClassGroup) -> Self {
        let spec = classes.spec();
        let units: Vec<u64> = spec.units_raw().collect();
        let inv = units.iter().map(|&u| spec.inv_unit(u)).collect();
        UnitTables {
            units,
            inv,
            class: classes.class_table().to_vec(),
        }
    }

    #[inline]
    fn class(&self, u: u64) -> u32 {
        self.class[(u >> 1) as usize]
    }
}

/// Even relations over all `(a, b, m)` with `a, b` units and `m` in the
/// maximal ideal, or a sample when the count exceeds `opts.cap`.
pub fn enumerate_even_relations(classes: &SquareClassGroup, opts: &EnumerationOptions) -> Result<RelationFamily> {
    check_class_count(classes)?;
    let spec = classes.spec();
    let tables = UnitTables::new(classes);
    let nu = tables.units.len() as u128;
    let total = nu * nu * nu;
    let ideal: Vec<u64> = spec.ideal_raw().collect();

    let eval = |a: u64, b: u64, m: u64, map: &mut KeyMap<[u64; 4]>| -> Result<()> {
        let ib = tables.inv[(b >> 1) as usize];
        let n = spec.neg(spec.mul(spec.mul(m, a), ib));
        let x = spec.add(a, spec.mul(spec.square(n), b));
        let y = spec.add(b, spec.mul(spec.square(m), a));
        if !spec.is_unit(x) || !spec.is_unit(y) {
            return Err(GwError::Internal(format!(
                "even relation at a={}, b={}, m={} left the unit group",
                spec.format(a),
                spec.format(b),
                spec.format(m)
            )));
        }
        let mut lhs = [tables.class(a), tables.class(b)];
        let mut rhs = [tables.class(x), tables.class(y)];
        if let Some(key) = pack(&mut lhs, &mut rhs) {
            map.entry(key).or_insert([a, b, m, n]);
        }
        Ok(())
    };

    let (map, evaluated, sampled) = if total <= opts.cap {
        let map = par::map_reduce(
            opts.exec,
            tables.units.len(),
            || Ok(KeyMap::default()),
            |ia| {
                let a = tables.units[ia];
                let mut map = KeyMap::default();
                for &b in &tables.units {
                    for &m in &ideal {
                        eval(a, b, m, &mut map)?;
                    }
                }
                Ok(map)
            },
            |x: Result<KeyMap<[u64; 4]>>, y| Ok(merge_min(x?, y?)),
        )?;
        (map, total, false)
    } else {
        let reps = classes.reps();
        let mut map = KeyMap::default();
        for &a in reps {
            for &b in reps {
                for &m in &ideal {
                    eval(a, b, m, &mut map)?;
                }
            }
        }
        let base = (reps.len() * reps.len() * ideal.len()) as u128;
        let extra = opts.cap.saturating_sub(base) as u64;
        let sampled_map = sample_chunks(opts, extra, 0x6576_656e, |rng, count, map| {
            for _ in 0..count {
                let a = tables.units[rng.gen_range(0..tables.units.len())];
                let b = tables.units[rng.gen_range(0..tables.units.len())];
                let m = ideal[rng.gen_range(0..ideal.len())];
                eval(a, b, m, map)?;
            }
            Ok(())
        })?;
        (merge_min(map, sampled_map), base + extra as u128, true)
    };

    Ok(RelationFamily {
        relations: finish(classes, map, 2, |[a, b, m, n]| Provenance::Even { a, b, m, n }),
        report: FamilyReport {
            tuples_total: total,
            tuples_evaluated: evaluated,
            sampled,
        },
    })
}

/// Odd relations over all unit 4-tuples, or class-representative tuples
/// plus seeded random tuples when `|units|^4` exceeds `opts.cap`.
pub fn enumerate_odd_relations(classes: &SquareClassGroup, opts: &EnumerationOptions) -> Result<RelationFamily> {
    check_class_count(classes)?;
    let spec = classes.spec();
    let tables = UnitTables::new(classes);
    let nu = tables.units.len() as u128;
    let total = nu * nu * nu * nu;
    let mul = |x: u32, y: u32| classes.mul(x as usize, y as usize) as u32;
    let not_unit = |a: u64, b: u64, c: u64, d: u64| {
        GwError::Internal(format!(
            "odd relation at ({}, {}, {}, {}) left the unit group",
            spec.format(a),
            spec.format(b),
            spec.format(c),
            spec.format(d)
        ))
    };

    let eval = |a: u64, b: u64, c: u64, d: u64, map: &mut KeyMap<[u64; 4]>| -> Result<()> {
        let t = odd_terms(&spec, a, b, c, d).map_err(|_| not_unit(a, b, c, d))?;
        let mut lhs = t.lhs.map(|x| tables.class(x));
        let mut rhs = t.rhs.map(|x| tables.class(x));
        if let Some(key) = pack(&mut lhs, &mut rhs) {
            map.entry(key).or_insert([a, b, c, d]);
        }
        Ok(())
    };

    let (map, evaluated, sampled) = if total <= opts.cap {
        // Loop nest with the partial sums hoisted out of the inner loops.
        let units = &tables.units;
        let map = par::map_reduce(
            opts.exec,
            units.len(),
            || Ok(KeyMap::default()),
            |ia| {
                let a = units[ia];
                let inv_a = tables.inv[ia];
                let ca = tables.class(a);
                let a_sq = spec.square(a);
                let mut map = KeyMap::default();
                for (ib, &b) in units.iter().enumerate() {
                    let cb = tables.class(b);
                    let v_ab = spec.add(inv_a, tables.inv[ib]);
                    let w_ab = spec.add(a, b);
                    let cab = mul(ca, cb);
                    for (ic, &c) in units.iter().enumerate() {
                        let cc = tables.class(c);
                        let w = spec.add(w_ab, spec.mul(a_sq, c));
                        let u_ac = spec.add(a, tables.inv[ic]);
                        if !spec.is_unit(w) {
                            return Err(not_unit(a, b, c, 0));
                        }
                        let cw = tables.class(w);
                        let cabcw = mul(mul(cab, cc), cw);
                        for (id, &d) in units.iter().enumerate() {
                            let u = spec.add(u_ac, tables.inv[id]);
                            let v = spec.add(v_ab, d);
                            if !spec.is_unit(u) || !spec.is_unit(v) {
                                return Err(not_unit(a, b, c, d));
                            }
                            let cd = tables.class(d);
                            let (cu, cv) = (tables.class(u), tables.class(v));
                            // <abcd uvw> = product of all seven classes
                            let ct = mul(mul(cabcw, cd), mul(cu, cv));
                            let mut lhs = [ca, cb, cc, cd];
                            let mut rhs = [cu, cv, cw, ct];
                            if let Some(key) = pack(&mut lhs, &mut rhs) {
                                map.entry(key).or_insert([a, b, c, d]);
                            }
                        }
                    }
                }
                Ok(map)
            },
            |x: Result<KeyMap<[u64; 4]>>, y| Ok(merge_min(x?, y?)),
        )?;
        (map, total, false)
    } else {
        let reps = classes.reps();
        let mut map = KeyMap::default();
        for &a in reps {
            for &b in reps {
                for &c in reps {
                    for &d in reps {
                        eval(a, b, c, d, &mut map)?;
                    }
                }
            }
        }
        let base = (reps.len() as u128).pow(4);
        let extra = opts.cap.saturating_sub(base) as u64;
        let sampled_map = sample_chunks(opts, extra, 0x006f_6464, |rng, count, map| {
            let n = tables.units.len();
            for _ in 0..count {
                let a = tables.units[rng.gen_range(0..n)];
                let b = tables.units[rng.gen_range(0..n)];
                let c = tables.units[rng.gen_range(0..n)];
                let d = tables.units[rng.gen_range(0..n)];
                eval(a, b, c, d, map)?;
            }
            Ok(())
        })?;
        (merge_min(map, sampled_map), base + extra as u128, true)
    };

    Ok(RelationFamily {
        relations: finish(classes, map, 4, |[a, b, c, d]| Provenance::Odd { a, b, c, d }),
        report: FamilyReport {
            tuples_total: total,
            tuples_evaluated: evaluated,
            sampled,
        },
    })
}

/// Runs `body` over `total` random draws split into fixed-size chunks, each
/// with its own ChaCha stream, so results do not depend on thread count.
fn sample_chunks<F>(opts: &EnumerationOptions, total: u64, salt: u64, body: F) -> Result<KeyMap<[u64; 4]>>
where
    F: Fn(&mut ChaCha8Rng, u64, &mut KeyMap<[u64; 4]>) -> Result<()> + Sync + Send,
{
    let chunks = total.div_ceil(SAMPLE_CHUNK) as usize;
    par::map_reduce(
        opts.exec,
        chunks,
        || Ok(KeyMap::default()),
        |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt.rotate_left(32));
            rng.set_stream(i as u64);
            let count = SAMPLE_CHUNK.min(total - i as u64 * SAMPLE_CHUNK);
            let mut map = KeyMap::default();
            body(&mut rng, count, &mut map)?;
            Ok(map)
        },
        |x: Result<KeyMap<[u64; 4]>>, y| Ok(merge_min(x?, y?)),
    )
}

/// Enumeration limits that were hit while building a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleInfo {
    pub cap: u128,
    pub even: FamilyReport,
    pub odd: FamilyReport,
}

/// Generators (square classes) and relations of `GW(R)`.
#[derive(Debug, Clone)]
pub struct Presentation {
    classes: SquareClassGroup,
    relations: Vec<RelationVector>,
    provenance: Vec<Provenance>,
    even: FamilyReport,
    odd: FamilyReport,
    cap: u128,
}

impl Presentation {
    pub fn build(spec: RingSpec, opts: &EnumerationOptions) -> Result<Self> {
        Self::from_classes(SquareClassGroup::compute(spec), opts)
    }

    pub fn from_classes(classes: SquareClassGroup, opts: &EnumerationOptions) -> Result<Self> {
        let even = enumerate_even_relations(&classes, opts)?;
        let odd = enumerate_odd_relations(&classes, opts)?;
        let mut merged = even.relations;
        for (v, p) in odd.relations {
            merged.entry(v).or_insert(p);
        }
        let (relations, provenance) = merged.into_iter().unzip();
        Ok(Presentation {
            classes,
            relations,
            provenance,
            even: even.report,
            odd: odd.report,
            cap: opts.cap,
        })
    }

    pub fn spec(&self) -> RingSpec {
        self.classes.spec()
    }

    pub fn classes(&self) -> &SquareClassGroup {
        &self.classes
    }

    pub fn relations(&self) -> &[RelationVector] {
        &self.relations
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RelationVector, &Provenance)> {
        self.relations.iter().zip(self.provenance.iter())
    }

    /// `Some` when either family was sampled rather than exhausted.
    pub fn sampled(&self) -> Option<SampleInfo> {
        (self.even.sampled || self.odd.sampled).then_some(SampleInfo {
            cap: self.cap,
            even: self.even,
            odd: self.odd,
        })
    }

    pub fn even_report(&self) -> FamilyReport {
        self.even
    }

    pub fn odd_report(&self) -> FamilyReport {
        self.odd
    }
}

impl fmt::Display for RelationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
