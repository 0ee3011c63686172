//! Ext, Tor and stable Hom of finitely presented graded modules.
//!
//! The degree-`d` slice functor is exact, so the cohomology of a complex of
//! graded modules is computed one degree at a time with ordinary linear
//! algebra. The terms `Hom(F_i, N)` and `F_i ⊗ N` are never materialized as
//! presentations inside the engine: they are direct sums of twists of `N`,
//! and their slices are assembled from the slices of `N`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Echelon, FieldElement, PrimeField, ScalarMatrix};
use crate::fracideal::MonomialFractionalIdeal;
use crate::graded::{FPGradedModule, GradedFreeModule, GradedRing, Resolution, SliceCache, TermMatrix};
use crate::semigroup::NumericalSemigroup;

/// `⊕_j N(a_j) = Hom(⊕ R(-a_j), N)`.
pub fn hom_free_into(f: &GradedFreeModule, n: &FPGradedModule) -> FPGradedModule {
    let parts: Vec<_> = f.shifts().iter().map(|&a| n.twist(a)).collect();
    FPGradedModule::direct_sum(n.ring(), &parts)
}

/// `⊕_j N(-a_j) = (⊕ R(-a_j)) ⊗ N`.
pub fn tensor_free(f: &GradedFreeModule, n: &FPGradedModule) -> FPGradedModule {
    let parts: Vec<_> = f.shifts().iter().map(|&a| n.twist(-a)).collect();
    FPGradedModule::direct_sum(n.ring(), &parts)
}

/// `⊕_j N_{d + offsets[j]}` in degree `d`.
struct SumTerm<'a> {
    base: &'a SliceCache<'a>,
    offsets: Vec<i64>,
    dims: RefCell<HashMap<i64, Rc<Vec<usize>>>>,
}

impl<'a> SumTerm<'a> {
    fn hom(f: &GradedFreeModule, base: &'a SliceCache<'a>) -> Self {
        SumTerm { base, offsets: f.shifts().to_vec(), dims: RefCell::default() }
    }

    fn tensor(f: &GradedFreeModule, base: &'a SliceCache<'a>) -> Self {
        SumTerm { base, offsets: f.shifts().iter().map(|a| -a).collect(), dims: RefCell::default() }
    }

    fn block_dims(&self, d: i64) -> Rc<Vec<usize>> {
        if let Some(x) = self.dims.borrow().get(&d) {
            return x.clone();
        }
        let x = Rc::new(self.offsets.iter().map(|o| self.base.dim(d + o)).collect::<Vec<_>>());
        self.dims.borrow_mut().insert(d, x.clone());
        x
    }

    fn dim(&self, d: i64) -> usize {
        self.block_dims(d).iter().sum()
    }

    /// Generator and relation degrees of the sum, as seen in degree `d` coordinates.
    fn shifts(&self) -> Vec<i64> {
        let base: Vec<i64> = self.base.module().all_shifts().collect();
        self.offsets.iter().flat_map(|o| base.iter().map(move |s| s - o)).collect()
    }

    fn generator_floor(&self) -> Option<i64> {
        let g = self.base.module().generators().min_shift()?;
        self.offsets.iter().map(|o| g - o).min()
    }

    /// Multiplication by `t^e` from degree `d` to `d + e`, applied block by
    /// block to a vector of the degree-`d` slice.
    fn apply_mul(&self, d: i64, e: i64, v: &[FieldElement]) -> Vec<FieldElement> {
        let src = self.block_dims(d);
        let dst = self.block_dims(d + e);
        let mut out = Vec::with_capacity(dst.iter().sum());
        let mut c0 = 0;
        for (j, o) in self.offsets.iter().enumerate() {
            let seg = &v[c0..c0 + src[j]];
            if dst[j] > 0 && src[j] > 0 && seg.iter().any(|&x| x != 0) {
                out.extend(self.base.mul(d + o, e).mul_vec(seg));
            } else {
                out.extend(std::iter::repeat(0).take(dst[j]));
            }
            c0 += src[j];
        }
        out
    }
}

fn paste(out: &mut ScalarMatrix, r0: usize, c0: usize, block: &ScalarMatrix, scale: FieldElement) {
    let f = out.field();
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let x = block.get(i, j);
            if x != 0 {
                let cur = out.get(r0 + i, c0 + j);
                out.set(r0 + i, c0 + j, f.add(cur, f.mul(scale, x)));
            }
        }
    }
}

/// A map between two sums of twists: block `(p, q)` is
/// `coeffs[p][q] · base ∘ t^(o_p - o_q)`.
struct BlockMap<'a, 'b> {
    source: &'b SumTerm<'a>,
    target: &'b SumTerm<'a>,
    coeffs: ScalarMatrix,
    /// Map of base modules on generators; `None` means the identity of a shared base.
    cover: Option<&'b TermMatrix>,
    cover_cache: RefCell<HashMap<(i64, i64), Rc<ScalarMatrix>>>,
}

impl<'a, 'b> BlockMap<'a, 'b> {
    fn new(source: &'b SumTerm<'a>, target: &'b SumTerm<'a>, coeffs: ScalarMatrix, cover: Option<&'b TermMatrix>) -> Self {
        debug_assert_eq!(coeffs.rows(), target.offsets.len());
        debug_assert_eq!(coeffs.cols(), source.offsets.len());
        BlockMap { source, target, coeffs, cover, cover_cache: RefCell::default() }
    }

    /// Base map `N_m → N'_{m+e}`.
    fn base_slice(&self, m: i64, e: i64) -> Rc<ScalarMatrix> {
        let Some(cover) = self.cover else {
            return self.source.base.mul(m, e);
        };
        if let Some(x) = self.cover_cache.borrow().get(&(m, e)) {
            return x.clone();
        }
        let src = self.source.base.slice(m);
        let dst = self.target.base.slice(m + e);
        let f = self.coeffs.field();
        let cols: Vec<Vec<FieldElement>> = (0..src.dim())
            .map(|k| {
                let g = src.active[src.basis[k]];
                let v: Vec<FieldElement> = dst.active.iter().map(|&h| cover.coeffs().get(h, g)).collect();
                dst.project(&v)
            })
            .collect();
        let out = Rc::new(ScalarMatrix::from_columns(f, dst.dim(), &cols));
        self.cover_cache.borrow_mut().insert((m, e), out.clone());
        out
    }

    fn slice(&self, d: i64) -> ScalarMatrix {
        let sd = self.source.block_dims(d);
        let td = self.target.block_dims(d);
        let f = self.coeffs.field();
        let mut out = ScalarMatrix::zeros(f, td.iter().sum(), sd.iter().sum());
        let mut r0 = 0;
        for p in 0..td.len() {
            let mut c0 = 0;
            for q in 0..sd.len() {
                let c = self.coeffs.get(p, q);
                if c != 0 && sd[q] > 0 && td[p] > 0 {
                    let m = d + self.source.offsets[q];
                    let e = self.target.offsets[p] - self.source.offsets[q];
                    paste(&mut out, r0, c0, &self.base_slice(m, e), c);
                }
                c0 += sd[q];
            }
            r0 += td[p];
        }
        out
    }
}

/// Per-degree data of `ker(out) / inc(ker(restrict))` inside the ambient term.
struct DegreeData {
    reps: Vec<Vec<FieldElement>>,
    coords: Echelon,
}

struct Subquotient<'a, 'b> {
    field: PrimeField,
    ambient: &'b SumTerm<'a>,
    outgoing: Option<BlockMap<'a, 'b>>,
    incoming: BlockMap<'a, 'b>,
    restrict: Option<BlockMap<'a, 'b>>,
}

impl Subquotient<'_, '_> {
    fn degree(&self, d: i64) -> DegreeData {
        let f = self.field;
        let nb = self.ambient.dim(d);
        let empty = DegreeData { reps: Vec::new(), coords: Echelon::new(f, nb) };
        if nb == 0 {
            return empty;
        }
        let cycles: Vec<Vec<FieldElement>> = match &self.outgoing {
            Some(out) => out.slice(d).kernel_basis().columns(),
            None => ScalarMatrix::identity(f, nb).columns(),
        };
        if cycles.is_empty() {
            return empty;
        }
        let alpha = self.incoming.slice(d);
        let boundaries: Vec<Vec<FieldElement>> = match &self.restrict {
            Some(r) => {
                let k = r.slice(d).kernel_basis();
                alpha.mul(&k).columns()
            }
            None => alpha.columns(),
        };
        // Boundaries carry zero coordinates; each cycle that is new modulo
        // everything before it becomes the next representative.
        let mut coords = Echelon::with_tracking(f, nb, cycles.len());
        for b in boundaries {
            if coords.rank() == cycles.len() {
                break;
            }
            coords.insert(b);
        }
        let mut reps = Vec::new();
        for z in cycles.iter() {
            let mut t = vec![0; cycles.len()];
            t[reps.len()] = 1;
            if coords.insert_tracked(z.clone(), t) {
                reps.push(z.clone());
            }
        }
        coords.truncate_tracking(reps.len());
        DegreeData { reps, coords }
    }
}

/// A computed Ext/Tor/stable-Hom module: finitely many nonzero slices and
/// the action of the semigroup generators between them.
#[derive(Debug, Clone)]
pub struct FiniteLengthGradedModule {
    semigroup: Arc<NumericalSemigroup>,
    field: PrimeField,
    /// Inclusive degree window; dimensions vanish outside it.
    window: (i64, i64),
    /// Degrees past the window verified to vanish.
    margin: i64,
    dims: Vec<usize>,
    /// Coset representatives per degree, as columns in the ambient slice.
    reps: Vec<ScalarMatrix>,
    /// `actions[g][d - lo]` is `t^{gen_g}: H_d → H_{d+gen_g}`.
    actions: Vec<Vec<ScalarMatrix>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleSummary {
    pub window: [i64; 2],
    pub dims: Vec<usize>,
    pub annihilator: Vec<i64>,
}

impl FiniteLengthGradedModule {
    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.window.0 || d > self.window.1 {
            0
        } else {
            self.dims[(d - self.window.0) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Coset representatives of the degree-`d` slice.
    pub fn slice_basis(&self, d: i64) -> Option<&ScalarMatrix> {
        if d < self.window.0 || d > self.window.1 {
            None
        } else {
            Some(&self.reps[(d - self.window.0) as usize])
        }
    }

    /// Smallest and largest degrees with a nonzero slice.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.dims.iter().position(|&x| x > 0)?;
        let hi = self.dims.iter().rposition(|&x| x > 0)?;
        Some((self.window.0 + lo as i64, self.window.0 + hi as i64))
    }

    /// Stored action of the `g`-th semigroup generator out of degree `d`.
    pub fn generator_action(&self, g: usize, d: i64) -> ScalarMatrix {
        let gen = self.semigroup.generators()[g];
        if d < self.window.0 || d > self.window.1 {
            return ScalarMatrix::zeros(self.field, self.dim(d + gen), self.dim(d));
        }
        self.actions[g][(d - self.window.0) as usize].clone()
    }

    /// Action of `t^s` for any `s ∈ S`, composed from generator actions.
    pub fn action(&self, s: i64, d: i64) -> ScalarMatrix {
        let mut memo = HashMap::new();
        self.action_memo(s, d, &mut memo)
    }

    fn action_memo(&self, s: i64, d: i64, memo: &mut HashMap<(i64, i64), ScalarMatrix>) -> ScalarMatrix {
        assert!(self.semigroup.contains(s), "t^{s} is not in the ring");
        if s == 0 {
            return ScalarMatrix::identity(self.field, self.dim(d));
        }
        if let Some(m) = memo.get(&(s, d)) {
            return m.clone();
        }
        let gens = self.semigroup.generators();
        let g = (0..gens.len()).find(|&g| self.semigroup.contains(s - gens[g])).unwrap();
        let first = self.generator_action(g, d);
        let rest = self.action_memo(s - gens[g], d + gens[g], memo);
        let out = rest.mul(&first);
        memo.insert((s, d), out.clone());
        out
    }

    /// `ann_R(H)` as a monomial ideal of `R`.
    pub fn annihilator(&self) -> MonomialFractionalIdeal {
        let s = self.semigroup.clone();
        let Some((lo, hi)) = self.support() else {
            return MonomialFractionalIdeal::unit(s);
        };
        let width = hi - lo;
        let mut memo = HashMap::new();
        let mut kills = HashMap::new();
        for z in 1..=width {
            if !s.contains(z) {
                continue;
            }
            let ok = (lo..=hi - z).all(|d| {
                self.dim(d) == 0 || self.dim(d + z) == 0 || self.action_memo(z, d, &mut memo).is_zero()
            });
            kills.insert(z, ok);
        }
        let top = (width + 1).max(s.conductor_threshold());
        MonomialFractionalIdeal::from_exponent_set(s.clone(), 0, top, |z| {
            z > 0 && s.contains(z) && (z > width || kills[&z])
        })
        .expect("an annihilator contains all large exponents")
    }

    pub fn summary(&self) -> ModuleSummary {
        ModuleSummary {
            window: [self.window.0, self.window.1],
            dims: self.dims.clone(),
            annihilator: self.annihilator().generators().to_vec(),
        }
    }
}

struct Engine<'a, 'b> {
    ring: GradedRing,
    sub: Subquotient<'a, 'b>,
    data: RefCell<HashMap<i64, Rc<DegreeData>>>,
}

impl Engine<'_, '_> {
    fn degree(&self, d: i64) -> Rc<DegreeData> {
        if let Some(x) = self.data.borrow().get(&d) {
            return x.clone();
        }
        let x = Rc::new(self.sub.degree(d));
        self.data.borrow_mut().insert(d, x.clone());
        x
    }

    /// Direct action of `t^s` from `H_d` to `H_{d+s}`.
    fn action(&self, s: i64, d: i64) -> ScalarMatrix {
        let src = self.degree(d);
        let dst = self.degree(d + s);
        let f = self.ring.field();
        if src.reps.is_empty() || dst.reps.is_empty() {
            return ScalarMatrix::zeros(f, dst.reps.len(), src.reps.len());
        }
        let cols: Vec<Vec<FieldElement>> = src
            .reps
            .iter()
            .map(|r| {
                let image = self.sub.ambient.apply_mul(d, s, r);
                dst.coords.express(&image).expect("t^s maps cycles to cycles")
            })
            .collect();
        ScalarMatrix::from_columns(f, dst.reps.len(), &cols)
    }

    fn finish(&self, window: Option<(i64, i64)>) -> Result<FiniteLengthGradedModule> {
        let s = self.ring.semigroup().clone();
        let f = self.ring.field();
        let c = self.ring.stable_width();
        let margin = c.max(1);
        let gens = s.generators().to_vec();
        let Some((lo, hi)) = window else {
            return Ok(FiniteLengthGradedModule {
                semigroup: s,
                field: f,
                window: (0, -1),
                margin,
                dims: Vec::new(),
                reps: Vec::new(),
                actions: vec![Vec::new(); gens.len()],
            });
        };
        for d in hi + 1..=hi + margin {
            let dim = self.degree(d).reps.len();
            if dim != 0 {
                return Err(Error::FiniteLength { degree: d, dim });
            }
        }
        let mut dims = Vec::new();
        let mut reps = Vec::new();
        for d in lo..=hi {
            let x = self.degree(d);
            dims.push(x.reps.len());
            let nb = self.sub.ambient.dim(d);
            reps.push(ScalarMatrix::from_columns(f, nb, &x.reps));
        }
        let actions = gens
            .iter()
            .map(|&g| {
                (lo..=hi)
                    .map(|d| {
                        if d + g > hi {
                            ScalarMatrix::zeros(f, 0, dims[(d - lo) as usize])
                        } else {
                            self.action(g, d)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteLengthGradedModule { semigroup: s, field: f, window: (lo, hi), margin, dims, reps, actions })
    }
}

fn window_for(ring: &GradedRing, ambient: &SumTerm, others: &[&SumTerm]) -> Option<(i64, i64)> {
    let lo = ambient.generator_floor()?;
    let hi = std::iter::once(ambient)
        .chain(others.iter().copied())
        .flat_map(|t| t.shifts())
        .max()?
        + ring.stable_width();
    Some((lo, hi.max(lo)))
}

fn hom_block(d: &TermMatrix) -> ScalarMatrix {
    d.coeffs().transpose()
}

/// `Ext^i(M, N)` from a resolution of `M` reaching `F_{i+1}`.
pub fn ext_from_resolution(i: usize, res: &Resolution, n: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    if i == 0 {
        return Err(Error::Precondition("Ext^0 is not of finite length; use i >= 1".into()));
    }
    let ring = n.ring().clone();
    let nc = SliceCache::new(n);
    let a = SumTerm::hom(&res.module(i - 1), &nc);
    let b = SumTerm::hom(&res.module(i), &nc);
    let c = SumTerm::hom(&res.module(i + 1), &nc);
    let sub = Subquotient {
        field: ring.field(),
        ambient: &b,
        outgoing: Some(BlockMap::new(&b, &c, hom_block(&res.differential(i + 1)), None)),
        incoming: BlockMap::new(&a, &b, hom_block(&res.differential(i)), None),
        restrict: None,
    };
    let window = window_for(&ring, &b, &[&a, &c]);
    let engine = Engine { ring, sub, data: RefCell::default() };
    engine.finish(window)
}

/// `Tor_i(M, N)` from a resolution of `M` reaching `F_{i+1}`.
pub fn tor_from_resolution(i: usize, res: &Resolution, n: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    if i == 0 {
        return Err(Error::Precondition("Tor_0 is not of finite length; use i >= 1".into()));
    }
    let ring = n.ring().clone();
    let nc = SliceCache::new(n);
    let a = SumTerm::tensor(&res.module(i + 1), &nc);
    let b = SumTerm::tensor(&res.module(i), &nc);
    let c = SumTerm::tensor(&res.module(i - 1), &nc);
    let sub = Subquotient {
        field: ring.field(),
        ambient: &b,
        outgoing: Some(BlockMap::new(&b, &c, res.differential(i).coeffs().clone(), None)),
        incoming: BlockMap::new(&a, &b, res.differential(i + 1).coeffs().clone(), None),
        restrict: None,
    };
    let window = window_for(&ring, &b, &[&a, &c]);
    let engine = Engine { ring, sub, data: RefCell::default() };
    engine.finish(window)
}

/// `Ext^i_R(M, N)` for `i >= 1`.
pub fn ext(i: usize, m: &FPGradedModule, n: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    ext_from_resolution(i, &m.resolve(i + 1), n)
}

/// `Tor_i^R(M, N)` for `i >= 1`.
pub fn tor(i: usize, m: &FPGradedModule, n: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    tor_from_resolution(i, &m.resolve(i + 1), n)
}

/// `Hom(M, M)` modulo the maps factoring through the projective cover of `M`.
pub fn stable_hom(m: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    stable_hom_between(m, m)
}

/// `Hom(M, N)` modulo the maps factoring through a free module, i.e.
/// through the projective cover of `N`.
pub fn stable_hom_between(m: &FPGradedModule, n: &FPGradedModule) -> Result<FiniteLengthGradedModule> {
    let m = m.minimalize();
    let n = n.minimalize();
    let ring = m.ring().clone();
    let f0 = m.generators().clone();
    let f1 = m.relations().clone();
    let g0 = n.generators().clone();
    let free = FPGradedModule::free(ring.clone(), g0.clone());
    let nc = SliceCache::new(&n);
    let fc = SliceCache::new(&free);
    let pi = TermMatrix::identity(ring.clone(), g0);
    let d1 = hom_block(m.presentation());
    let b = SumTerm::hom(&f0, &nc);
    let c = SumTerm::hom(&f1, &nc);
    let a = SumTerm::hom(&f0, &fc);
    let a2 = SumTerm::hom(&f1, &fc);
    let sub = Subquotient {
        field: ring.field(),
        ambient: &b,
        outgoing: Some(BlockMap::new(&b, &c, d1.clone(), None)),
        incoming: BlockMap::new(&a, &b, ScalarMatrix::identity(ring.field(), f0.rank()), Some(&pi)),
        restrict: Some(BlockMap::new(&a, &a2, d1, None)),
    };
    let window = window_for(&ring, &b, &[&a, &c, &a2]);
    let engine = Engine { ring, sub, data: RefCell::default() };
    engine.finish(window)
}

/// Total dimension of the stable endomorphism module.
pub fn stable_hom_dim(m: &FPGradedModule) -> Result<usize> {
    Ok(stable_hom(m)?.total_dim())
}

/// Compares every composed `t^s` action of `Ext^i(M, N)` against a direct
/// computation, for `s ∈ S` up to the window width.
pub fn ext_action_consistent(i: usize, m: &FPGradedModule, n: &FPGradedModule) -> Result<bool> {
    let res = m.resolve(i + 1);
    let ring = n.ring().clone();
    let nc = SliceCache::new(n);
    let a = SumTerm::hom(&res.module(i - 1), &nc);
    let b = SumTerm::hom(&res.module(i), &nc);
    let c = SumTerm::hom(&res.module(i + 1), &nc);
    let sub = Subquotient {
        field: ring.field(),
        ambient: &b,
        outgoing: Some(BlockMap::new(&b, &c, hom_block(&res.differential(i + 1)), None)),
        incoming: BlockMap::new(&a, &b, hom_block(&res.differential(i)), None),
        restrict: None,
    };
    let window = window_for(&ring, &b, &[&a, &c]);
    let engine = Engine { ring: ring.clone(), sub, data: RefCell::default() };
    let h = engine.finish(window)?;
    let (lo, hi) = h.window();
    let s = ring.semigroup();
    for z in 1..=(hi - lo).max(0) {
        if !s.contains(z) {
            continue;
        }
        for d in lo..=hi {
            let composed = h.action(z, d);
            let direct = if d + z > hi {
                ScalarMatrix::zeros(ring.field(), 0, h.dim(d))
            } else {
                engine.action(z, d)
            };
            if composed != direct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Annihilators of `Ext^i(M, N)` and `Tor_i(M, N)` for a list of sources
/// `M`, a list of targets `N` and `1 <= i <= depth`.
///
/// Uses `Ext^i(M, N) = Ext^1(Ω^{i-1} M, N)` (likewise for Tor). Targets are
/// split into block summands; syzygies are split further by idempotents of
/// their degree-0 endomorphism ring. The annihilator of a direct sum is the
/// intersection over the summands, and summands that agree up to a twist are
/// computed once, which keeps the work flat in `i` even though the Betti
/// numbers grow geometrically.
#[derive(Debug, Clone)]
pub struct HomologyTable {
    semigroup: Arc<NumericalSemigroup>,
    depth: usize,
    cap: Option<usize>,
    summands: Vec<Summand>,
    /// `ladders[m][k]`: summands of `Ω^k M`, up to twist; `None` past a
    /// summand that was over the cap.
    ladders: Vec<Vec<Option<Vec<usize>>>>,
    /// Block summands of each target, up to twist.
    target_parts: Vec<Vec<usize>>,
}

type AnnPair = (MonomialFractionalIdeal, MonomialFractionalIdeal);

#[derive(Debug, Clone)]
struct Summand {
    module: FPGradedModule,
    /// Betti numbers `β_0, β_1, β_2` of the summand.
    betti: Vec<usize>,
    /// False when the summand was over the generator cap.
    computed: bool,
    certified: bool,
    /// One entry per distinct target summand.
    anns: Vec<Result<AnnPair>>,
}

struct Interner {
    index: HashMap<String, usize>,
    modules: Vec<FPGradedModule>,
}

impl Interner {
    fn add(&mut self, m: &FPGradedModule) -> usize {
        let m = m.normalized();
        let key = serde_json::to_string(&m.presentation().to_json()).expect("presentations serialize");
        *self.index.entry(key).or_insert_with(|| {
            self.modules.push(m);
            self.modules.len() - 1
        })
    }

    fn add_all(&mut self, m: &FPGradedModule) -> Vec<usize> {
        let mut v: Vec<usize> = m.block_summands().iter().map(|x| self.add(x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl HomologyTable {
    pub fn new(ring: &GradedRing, sources: &[FPGradedModule], targets: &[FPGradedModule], depth: usize) -> Self {
        Self::with_cap(ring, sources, targets, depth, None)
    }

    /// Like [`HomologyTable::new`], but summands with more than `cap` minimal
    /// generators are neither resolved nor expanded; every group that needs
    /// one reports [`Error::Incomplete`].
    pub fn with_cap(
        ring: &GradedRing,
        sources: &[FPGradedModule],
        targets: &[FPGradedModule],
        depth: usize,
        cap: Option<usize>,
    ) -> Self {
        Self::with_depths(ring, sources, &vec![depth; sources.len()], targets, cap)
    }

    /// Source `m` is tabulated for `1 <= i <= depths[m]`.
    pub fn with_depths(
        ring: &GradedRing,
        sources: &[FPGradedModule],
        depths: &[usize],
        targets: &[FPGradedModule],
        cap: Option<usize>,
    ) -> Self {
        assert_eq!(sources.len(), depths.len());
        assert!(depths.iter().all(|&d| d >= 1), "depth starts at 1");
        let depth = depths.iter().copied().max().unwrap_or(1);
        let admitted = |m: &FPGradedModule| cap.map_or(true, |c| m.generators().rank() <= c);
        let mut interner = Interner { index: HashMap::new(), modules: Vec::new() };
        let mut resolutions: Vec<Option<Resolution>> = Vec::new();
        let mut children: Vec<Option<Vec<usize>>> = Vec::new();
        let mut frontier: Vec<Option<Vec<usize>>> = sources.iter().map(|m| Some(interner.add_all(m))).collect();
        let mut ladders: Vec<Vec<Option<Vec<usize>>>> = vec![Vec::new(); sources.len()];
        for level in 0..depth {
            let fresh: Vec<Option<Resolution>> = interner.modules[resolutions.len()..]
                .par_iter()
                .map(|m| admitted(m).then(|| m.resolve(2)))
                .collect();
            resolutions.extend(fresh);
            children.resize(resolutions.len(), None);
            for ((ladder, front), &d) in ladders.iter_mut().zip(&frontier).zip(depths) {
                if level < d {
                    ladder.push(front.clone());
                }
            }
            if level + 1 == depth {
                break;
            }
            for (front, &d) in frontier.iter_mut().zip(depths) {
                if level + 1 >= d {
                    *front = Some(Vec::new());
                    continue;
                }
                let Some(current) = front.as_ref() else { continue };
                if current.iter().any(|&y| resolutions[y].is_none()) {
                    *front = None;
                    continue;
                }
                let mut next = Vec::new();
                for &y in current {
                    if children[y].is_none() {
                        let parts = interner.modules[y].syzygy_summands();
                        let mut ids: Vec<usize> = parts.iter().map(|x| interner.add(x)).collect();
                        ids.sort_unstable();
                        ids.dedup();
                        children[y] = Some(ids);
                    }
                    next.extend_from_slice(children[y].as_ref().unwrap());
                }
                next.sort_unstable();
                next.dedup();
                *front = Some(next);
            }
        }
        let mut target_interner = Interner { index: HashMap::new(), modules: Vec::new() };
        let target_parts: Vec<Vec<usize>> = targets.iter().map(|n| target_interner.add_all(n)).collect();
        let target_modules = target_interner.modules;
        let summands = interner
            .modules
            .into_par_iter()
            .zip(resolutions.into_par_iter())
            .map(|(module, res)| {
                let Some(res) = res else {
                    return Summand { betti: vec![module.generators().rank()], module, computed: false, certified: false, anns: Vec::new() };
                };
                let anns = target_modules
                    .iter()
                    .map(|n| {
                        let e = ext_from_resolution(1, &res, n)?.annihilator();
                        let t = tor_from_resolution(1, &res, n)?.annihilator();
                        Ok((e, t))
                    })
                    .collect();
                let certified = res.differential(1).kernel_bound_certified();
                Summand { module, betti: res.betti(), computed: true, certified, anns }
            })
            .collect();
        HomologyTable { semigroup: ring.semigroup().clone(), depth, cap, summands, ladders, target_parts }
    }

    /// Largest depth of any source.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Depth to which source `m` was tabulated.
    pub fn depth_of(&self, m: usize) -> usize {
        self.ladders[m].len()
    }

    /// Number of distinct summands computed.
    pub fn summand_count(&self) -> usize {
        self.summands.len()
    }

    /// Distinct summands of `Ω^{i-1}` of source `m`, normalized; `None` when
    /// that syzygy lies past a summand over the cap.
    pub fn summands(&self, m: usize, i: usize) -> Option<Vec<&FPGradedModule>> {
        Some(self.level(m, i)?.iter().map(|&k| &self.summands[k].module).collect())
    }

    fn level(&self, m: usize, i: usize) -> Option<&[usize]> {
        assert!(i >= 1 && i <= self.depth_of(m), "index {i} outside 1..={}", self.depth_of(m));
        self.ladders[m][i - 1].as_deref()
    }

    fn meet(&self, m: usize, i: usize, n: usize, pick: impl Fn(&AnnPair) -> &MonomialFractionalIdeal) -> Result<MonomialFractionalIdeal> {
        let cap = self.cap.unwrap_or(usize::MAX);
        let level = self.level(m, i).ok_or_else(|| {
            Error::Incomplete(format!("Ω^{} lies past a syzygy summand with more than {cap} generators", i - 1))
        })?;
        let mut acc = MonomialFractionalIdeal::unit(self.semigroup.clone());
        for &k in level {
            let x = &self.summands[k];
            if !x.computed {
                return Err(Error::Incomplete(format!(
                    "Ω^{} has a summand with {} generators, above the cap of {cap}",
                    i - 1,
                    x.module.generators().rank()
                )));
            }
            for &l in &self.target_parts[n] {
                let pair = x.anns[l].as_ref().map_err(Clone::clone)?;
                acc = acc.intersection(pick(pair));
            }
        }
        Ok(acc)
    }

    /// `ann Ext^i(M_m, N_n)`.
    pub fn ext_ann(&self, m: usize, i: usize, n: usize) -> Result<MonomialFractionalIdeal> {
        self.meet(m, i, n, |p| &p.0)
    }

    /// `ann Tor_i(M_m, N_n)`.
    pub fn tor_ann(&self, m: usize, i: usize, n: usize) -> Result<MonomialFractionalIdeal> {
        self.meet(m, i, n, |p| &p.1)
    }

    fn reached(&self, m: usize) -> impl Iterator<Item = &Summand> {
        self.ladders[m].iter().flatten().flatten().map(|&k| &self.summands[k]).filter(|x| x.computed)
    }

    /// Whether every kernel computed for source `m` passed the
    /// `maxshift + 3c` rescan.
    pub fn certified(&self, m: usize) -> bool {
        self.reached(m).all(|x| x.certified)
    }

    /// Whether every level of source `m` was computed.
    pub fn complete(&self, m: usize) -> bool {
        self.ladders[m].iter().all(|l| l.as_ref().is_some_and(|ids| ids.iter().all(|&k| self.summands[k].computed)))
    }

    /// Largest Betti number among the computed summands of source `m`.
    pub fn max_summand_rank(&self, m: usize) -> usize {
        self.reached(m).map(|x| x.betti.iter().copied().max().unwrap_or(0)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::present;

    fn ring(g: &[i64]) -> GradedRing {
        GradedRing::new(Arc::new(NumericalSemigroup::from_generators(g).unwrap()), PrimeField::default())
    }
    fn ideal(r: &GradedRing, g: &[i64]) -> MonomialFractionalIdeal {
        MonomialFractionalIdeal::new(r.semigroup().clone(), g).unwrap()
    }

    #[test]
    fn hom_and_tensor_of_free_modules() {
        let r = ring(&[2, 3]);
        let rr = FPGradedModule::free(r.clone(), GradedFreeModule::new(vec![0]));
        let n = present(&r, &ideal(&r, &[0, 1]));
        let one = GradedFreeModule::new(vec![0]);
        assert_eq!(hom_free_into(&one, &n).hilbert_window(-5, 10), n.hilbert_window(-5, 10));
        assert_eq!(tensor_free(&one, &n).hilbert_window(-5, 10), n.hilbert_window(-5, 10));
        let h = hom_free_into(&GradedFreeModule::new(vec![4]), &rr);
        for d in -8..6 {
            assert_eq!(h.hilbert(d), usize::from(r.semigroup().contains(d + 4)));
        }
        let t = tensor_free(&GradedFreeModule::new(vec![4]), &n);
        for d in -8..12 {
            assert_eq!(t.hilbert(d), n.hilbert(d - 4));
        }
        let two = GradedFreeModule::new(vec![1, 3]);
        let h = hom_free_into(&two, &n);
        for d in -8..12 {
            assert_eq!(h.hilbert(d), n.hilbert(d + 1) + n.hilbert(d + 3));
        }
    }

    #[test]
    fn free_first_argument_gives_zero() {
        let r = ring(&[2, 3]);
        let f = FPGradedModule::free(r.clone(), GradedFreeModule::new(vec![0, 2]));
        let n = FPGradedModule::residue_field(r.clone());
        assert!(ext(1, &f, &n).unwrap().is_zero());
        assert!(tor(1, &f, &n).unwrap().is_zero());
        assert_eq!(ext(1, &f, &n).unwrap().annihilator().generators(), &[0]);
    }

    #[test]
    fn cusp_maximal_ideal_witnesses() {
        let r = ring(&[2, 3]);
        let m = present(&r, &ideal(&r, &[2, 3]));
        let e = ext(1, &m, &m.syzygy(1)).unwrap();
        assert!(!e.is_zero());
        assert_eq!(e.annihilator().generators(), &[2, 3]);
        let t = tor(1, &m, &m.transpose()).unwrap();
        assert_eq!(t.annihilator().generators(), &[2, 3]);
        assert_eq!(t.total_dim(), stable_hom_dim(&m).unwrap());
    }

    #[test]
    fn single_slice_annihilator_is_maximal_ideal() {
        // Ext^1(k, k) over <3,4,5> is concentrated where the generators of m sit
        let r = ring(&[3, 4, 5]);
        let k = FPGradedModule::residue_field(r.clone());
        let t = tor(1, &k, &k).unwrap();
        assert_eq!(t.annihilator().generators(), &[3, 4, 5]);
    }

    #[test]
    fn regular_ring_has_no_higher_ext() {
        let r = ring(&[1]);
        let k = FPGradedModule::residue_field(r.clone());
        let x = present(&r, &ideal(&r, &[0]));
        for i in 1..=3 {
            assert!(ext(i, &k, &x).unwrap().is_zero() || i == 1);
            assert!(tor(i + 1, &k, &k).unwrap().is_zero());
        }
        assert!(ext(2, &k, &k).unwrap().is_zero());
    }

    #[test]
    fn actions_compose_consistently() {
        let r = ring(&[3, 4, 5]);
        let m = present(&r, &ideal(&r, &[0, 1]));
        let k = FPGradedModule::residue_field(r.clone());
        assert!(ext_action_consistent(1, &m, &m.syzygy(1)).unwrap());
        assert!(ext_action_consistent(2, &k, &m).unwrap());
    }

    #[test]
    fn stable_hom_of_free_is_zero() {
        let r = ring(&[2, 3]);
        let f = FPGradedModule::free(r, GradedFreeModule::new(vec![0, 5]));
        assert_eq!(stable_hom_dim(&f).unwrap(), 0);
    }

    #[test]
    fn ext0_is_rejected() {
        let r = ring(&[2, 3]);
        let k = FPGradedModule::residue_field(r);
        assert!(ext(0, &k, &k).is_err());
    }
}
