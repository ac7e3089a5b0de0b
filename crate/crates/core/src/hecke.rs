//! Hecke triangle groups `G_N = <S, T>` with
//! `S = [[0,-1],[1,0]]`, `T = [[1, 2cos(pi/N)],[0,1]]`, their `N -> ∞` limit
//! `<S, [[1,2],[0,1]]>`, and truncated primitive length spectra.
//!
//! # Enumeration
//!
//! `G_N` is the free product of `<S>` (order 2) and `<U>`, `U = ST`
//! (order `N`). Every hyperbolic conjugacy class has a cyclically reduced
//! representative `S U^{k_1} S U^{k_2} ... S U^{k_m}`, unique up to cyclic
//! rotation of the syllable sequence `(k_1, ..., k_m)`, `1 <= k_i <= N-1`.
//! Projectively `S U^k = A_k = [[s_k, s_{k+1}], [s_{k-1}, s_k]]` with
//! `s_j = sin(j pi/N) / sin(pi/N)`; every `A_k` has non-negative entries and
//! diagonal at least 1, so the trace never decreases when a syllable is
//! appended. The enumeration walks lexicographically minimal syllable
//! sequences (pre-necklaces) depth first, pruning on the trace bound, and
//! keeps the aperiodic necklaces: these are exactly the primitive classes.
//! Word length is measured in syllables.
//!
//! The letters `k = 1` (`A_1 = T`) and `k = N-1` are parabolic. A run of
//! `r` copies of one of them followed by any other letter already has trace
//! at least `r lambda + 2`, which bounds the runs.
//!
//! In the limit group `U = S T_2` is parabolic of infinite order, the
//! syllables range over `k ∈ Z \ {0}`, and `A_k = [[k, k+1], [k-1, k]]`,
//! `A_{-j} = [[j, j-1], [j+1, j]]`; the parabolic letters are `±1`. Since
//! `tr(A_k) = 2|k|`, only `|k| <= B/2` can occur below trace bound `B`.
//!
//! # Completeness
//!
//! A class whose syllable length exceeds `max_word_len` has a
//! lexicographically minimal rotation whose first `max_word_len + 1`
//! syllables form a pre-necklace, and its trace is at least the trace of
//! that prefix. The enumeration records the smallest such prefix bound; all
//! classes with trace below `min(trace_bound, prefix bound)` are present,
//! and the completeness radius is `2 acosh` of half that trace.
//!
//! # Cache
//!
//! [`SpectrumCache`] stores spectra as JSON files named
//! `hecke-v1-N{N|inf}-L{max_word_len}-B{trace_bound bits as hex}.json` with
//! fields `{"version", "group", "max_word_len", "trace_bound", "spectrum",
//! "completeness_radius", "trace_radius", "warnings"}`. The directory comes
//! from the caller or from the `HYPERHEAT_CACHE_DIR` environment variable.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SurfaceSignature;
use crate::numerics::acosh1p;
use crate::surface::{LengthSpectrum, SurfaceData};

/// Traces within this relative distance of 2 count as parabolic, and
/// classes whose traces agree this closely share one spectrum entry.
pub const TRACE_TOLERANCE: f64 = 1e-9;

/// Environment variable naming the default spectrum cache directory.
pub const CACHE_DIR_ENV: &str = "HYPERHEAT_CACHE_DIR";

const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HeckeGroup {
    /// `G_N`, `N >= 3`.
    Finite(u32),
    /// The `N -> ∞` limit, generated by `S` and translation by 2.
    Limit,
}

impl HeckeGroup {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("HeckeGroup", format!("need N >= 3, got {n}")));
        }
        Ok(HeckeGroup::Finite(n))
    }

    pub fn limit() -> Self {
        HeckeGroup::Limit
    }

    /// `2 cos(pi/N)`, or 2 for the limit group.
    pub fn lambda(&self) -> f64 {
        match *self {
            HeckeGroup::Finite(3) => 1.0,
            HeckeGroup::Finite(4) => std::f64::consts::SQRT_2,
            HeckeGroup::Finite(6) => 3f64.sqrt(),
            HeckeGroup::Finite(n) => 2.0 * (PI / f64::from(n)).cos(),
            HeckeGroup::Limit => 2.0,
        }
    }

    /// `true` when all matrix entries are integers (`N = 3` and the limit),
    /// so traces can be checked exactly.
    pub fn is_integral(&self) -> bool {
        matches!(self, HeckeGroup::Finite(3) | HeckeGroup::Limit)
    }

    /// Orbifold signature of `H / G`: one cusp and cones of orders 2 and
    /// `N`; the limit group has two cusps and a single cone of order 2.
    pub fn signature(&self) -> SurfaceSignature {
        match *self {
            HeckeGroup::Finite(n) => SurfaceSignature::new(0, 1, vec![2, n]),
            HeckeGroup::Limit => SurfaceSignature::new(0, 2, vec![2]),
        }
        .expect("Hecke signatures are hyperbolic")
    }

    /// Cone orders that degenerate into a cusp as `N -> ∞`.
    pub fn degenerating_orders(&self) -> Vec<u32> {
        match *self {
            HeckeGroup::Finite(n) => vec![n],
            HeckeGroup::Limit => vec![],
        }
    }

    fn label(&self) -> String {
        match *self {
            HeckeGroup::Finite(n) => format!("N{n}"),
            HeckeGroup::Limit => "Ninf".to_string(),
        }
    }
}

impl std::fmt::Display for HeckeGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeckeGroup::Finite(n) => write!(f, "G_{n}"),
            HeckeGroup::Limit => write!(f, "G_inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Letter::S => "S",
            Letter::T => "T",
            Letter::TInv => "t",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A matrix of `SL(2, R)` (read projectively) together with a defining
/// word in `S`, `T`, `T^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: [f64; 4],
    pub word: Vec<Letter>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            matrix: [1.0, 0.0, 0.0, 1.0],
            word: Vec::new(),
        }
    }

    pub fn letter(grp: HeckeGroup, l: Letter) -> Self {
        let lam = grp.lambda();
        let matrix = match l {
            Letter::S => [0.0, -1.0, 1.0, 0.0],
            Letter::T => [1.0, lam, 0.0, 1.0],
            Letter::TInv => [1.0, -lam, 0.0, 1.0],
        };
        Self {
            matrix,
            word: vec![l],
        }
    }

    pub fn from_word(grp: HeckeGroup, word: &[Letter]) -> Self {
        word.iter()
            .fold(Self::identity(), |acc, &l| acc.mul(&Self::letter(grp, l), grp))
    }

    /// Product with the word freely reduced (`S S = 1`, `T T^{-1} = 1`) and,
    /// for finite `N`, `(ST)^N` and `(T^{-1}S)^N` removed.
    pub fn mul(&self, other: &Self, grp: HeckeGroup) -> Self {
        let [a, b, c, d] = self.matrix;
        let [e, f, g, h] = other.matrix;
        let mut word = self.word.clone();
        for &l in &other.word {
            if word.last() == Some(&l.inverse()) {
                word.pop();
            } else {
                word.push(l);
            }
        }
        if let HeckeGroup::Finite(n) = grp {
            remove_relator_powers(&mut word, n as usize);
        }
        Self {
            matrix: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            word,
        }
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.matrix;
        Self {
            matrix: [d, -b, -c, a],
            word: self.word.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix[0] + self.matrix[3]
    }

    pub fn det(&self) -> f64 {
        self.matrix[0] * self.matrix[3] - self.matrix[1] * self.matrix[2]
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "1".to_string();
        }
        self.word.iter().map(|l| l.to_string()).collect()
    }
}

fn remove_relator_powers(word: &mut Vec<Letter>, n: usize) {
    let patterns = [[Letter::S, Letter::T], [Letter::TInv, Letter::S]];
    let len = 2 * n;
    loop {
        let mut changed = false;
        for pat in &patterns {
            if word.len() < len {
                continue;
            }
            if let Some(start) = (0..=word.len() - len)
                .find(|&i| (0..len).all(|j| word[i + j] == pat[j % 2]))
            {
                word.drain(start..start + len);
                changed = true;
            }
        }
        if !changed {
            break;
        }
        // Draining can create new cancellations at the seam.
        let mut reduced: Vec<Letter> = Vec::with_capacity(word.len());
        for &l in word.iter() {
            if reduced.last() == Some(&l.inverse()) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        *word = reduced;
    }
}

/// `(S, T)` for the group.
pub fn generators(grp: HeckeGroup) -> (GroupElement, GroupElement) {
    (
        GroupElement::letter(grp, Letter::S),
        GroupElement::letter(grp, Letter::T),
    )
}

/// Classifies by `|tr|` against 2 (within [`TRACE_TOLERANCE`]); `±1` is the
/// identity.
pub fn classify(g: &GroupElement) -> ElementKind {
    let [a, b, c, d] = g.matrix;
    let tol = TRACE_TOLERANCE;
    if b.abs() <= tol && c.abs() <= tol && (a - d).abs() <= tol && (a.abs() - 1.0).abs() <= tol {
        return ElementKind::Identity;
    }
    let tr = (a + d).abs();
    if (tr - 2.0).abs() <= tol {
        ElementKind::Parabolic
    } else if tr < 2.0 {
        ElementKind::Elliptic
    } else {
        ElementKind::Hyperbolic
    }
}

/// `2 acosh(|tr|/2)` from a trace.
pub fn length_from_trace(trace: f64) -> f64 {
    2.0 * acosh1p(0.5 * (trace.abs() - 2.0).max(0.0))
}

/// Translation length of a hyperbolic element.
pub fn geodesic_length(g: &GroupElement) -> Result<f64> {
    match classify(g) {
        ElementKind::Hyperbolic => Ok(length_from_trace(g.trace())),
        kind => Err(Error::domain(
            "geodesic_length",
            format!("element {} is {kind:?}, not hyperbolic", g.word_string()),
        )),
    }
}

/// One syllable `S U^k` as a float matrix, an exact integer matrix when the
/// group is integral, and flags for the pruning rules.
#[derive(Debug, Clone, Copy)]
struct Syllable {
    k: i64,
    m: [f64; 4],
    exact: Option<[i128; 4]>,
    parabolic: bool,
}

fn alphabet(grp: HeckeGroup, trace_bound: f64) -> Vec<Syllable> {
    match grp {
        HeckeGroup::Finite(n) => {
            let s = |j: u32| -> f64 {
                let j = j.min(n - j);
                if j == 0 {
                    0.0
                } else if j == 1 {
                    1.0
                } else {
                    (f64::from(j) * PI / f64::from(n)).sin() / (PI / f64::from(n)).sin()
                }
            };
            (1..n)
                .map(|k| {
                    let m = [s(k), s(k + 1), s(k - 1), s(k)];
                    let exact = (n == 3).then(|| m.map(|x| x.round() as i128));
                    Syllable {
                        k: i64::from(k),
                        m,
                        exact,
                        parabolic: k == 1 || k == n - 1,
                    }
                })
                .collect()
        }
        HeckeGroup::Limit => {
            let kmax = (trace_bound / 2.0).floor().max(1.0) as i64;
            (-kmax..=kmax)
                .filter(|&k| k != 0)
                .map(|k| {
                    let e: [i128; 4] = if k > 0 {
                        let k = i128::from(k);
                        [k, k + 1, k - 1, k]
                    } else {
                        let j = i128::from(-k);
                        [j, j - 1, j + 1, j]
                    };
                    Syllable {
                        k,
                        m: e.map(|x| x as f64),
                        exact: Some(e),
                        parabolic: k.abs() == 1,
                    }
                })
                .collect()
        }
    }
}

fn mat_mul(x: &[f64; 4], y: &[f64; 4]) -> [f64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn mat_mul_exact(x: &[i128; 4], y: &[i128; 4]) -> [i128; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// A primitive hyperbolic conjugacy class found by the enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// Lexicographically minimal syllable sequence `(k_1, ..., k_m)`.
    pub syllables: Vec<i64>,
    pub trace: f64,
    pub exact_trace: Option<i128>,
}

impl ClassRecord {
    pub fn length(&self) -> f64 {
        length_from_trace(self.exact_trace.map_or(self.trace, |t| t as f64))
    }

    /// Syllables of the inverse class, rotated to lexicographically minimal
    /// form in the group's letter order.
    pub fn inverse_syllables(&self, grp: HeckeGroup) -> Vec<i64> {
        let inv: Vec<i64> = self
            .syllables
            .iter()
            .rev()
            .map(|&k| match grp {
                HeckeGroup::Finite(n) => i64::from(n) - k,
                HeckeGroup::Limit => -k,
            })
            .collect();
        minimal_rotation(&inv)
    }

    /// Representative `S U^{k_1} ... S U^{k_m}` as a group element.
    pub fn representative(&self, grp: HeckeGroup) -> GroupElement {
        let (s, t) = generators(grp);
        let u = s.mul(&t, grp);
        let u_inv = u.inverse();
        let mut g = GroupElement::identity();
        for &k in &self.syllables {
            g = g.mul(&s, grp);
            let (step, count) = if k > 0 { (&u, k) } else { (&u_inv, -k) };
            for _ in 0..count {
                g = g.mul(step, grp);
            }
        }
        g
    }
}

fn minimal_rotation(w: &[i64]) -> Vec<i64> {
    (0..w.len())
        .map(|r| {
            let mut v = w[r..].to_vec();
            v.extend_from_slice(&w[..r]);
            v
        })
        .min()
        .unwrap_or_default()
}

/// Result of enumerating one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enumeration {
    pub group: HeckeGroup,
    pub max_word_len: usize,
    pub trace_bound: f64,
    /// Every class with trace below this value is present.
    pub trace_radius: f64,
    pub classes: Vec<ClassRecord>,
    pub warnings: Vec<String>,
}

impl Enumeration {
    pub fn completeness_radius(&self) -> f64 {
        length_from_trace(self.trace_radius)
    }

    /// Groups the classes into `(length, multiplicity)` entries: classes
    /// whose traces agree to [`TRACE_TOLERANCE`] (relative) share an entry.
    pub fn spectrum(&self) -> Result<LengthSpectrum> {
        let mut entries: Vec<(f64, u64)> = Vec::new();
        let mut last_trace = f64::NAN;
        for c in &self.classes {
            let tr = c.exact_trace.map_or(c.trace, |t| t as f64);
            match entries.last_mut() {
                Some(e) if (tr - last_trace).abs() <= TRACE_TOLERANCE * tr => e.1 += 1,
                _ => {
                    entries.push((length_from_trace(tr), 1));
                    last_trace = tr;
                }
            }
        }
        LengthSpectrum::new(entries, self.completeness_radius())
    }
}

struct Search<'a> {
    letters: &'a [Syllable],
    max_len: usize,
    bound: f64,
    lambda: f64,
    found: Vec<ClassRecord>,
    /// Smallest trace lower bound over pre-necklaces of length `max_len + 1`.
    overflow_bound: f64,
}

impl Search<'_> {
    /// `word` holds letter indices of a pre-necklace with period `p`;
    /// `m` is its product.
    fn visit(&mut self, word: &mut Vec<usize>, p: usize, m: [f64; 4], exact: Option<[i128; 4]>) {
        let t = word.len();
        let tr = m[0] + m[3];
        if t > self.max_len {
            let all_same_parabolic =
                word.iter().all(|&i| i == word[0]) && self.letters[word[0]].parabolic;
            let lower = if all_same_parabolic {
                t as f64 * self.lambda + 2.0
            } else {
                tr
            };
            self.overflow_bound = self.overflow_bound.min(lower);
            return;
        }
        if p == t && tr > 2.0 * (1.0 + TRACE_TOLERANCE) {
            self.found.push(ClassRecord {
                syllables: word.iter().map(|&i| self.letters[i].k).collect(),
                trace: tr,
                exact_trace: exact.map(|e| e[0] + e[3]),
            });
        }
        let first = word[0];
        let start = word[t - p];
        for (i, letter) in self.letters.iter().enumerate().skip(start) {
            // Pre-necklace extension: a[t] >= a[t-p]; larger letters reset
            // the period.
            let new_p = if i == start { p } else { t + 1 };
            let nm = mat_mul(&m, &letter.m);
            let ntr = nm[0] + nm[3];
            let same_run = i == first && word.iter().all(|&j| j == first);
            if same_run && letter.parabolic {
                // Power of one parabolic letter: trace stays 2, but any
                // extension by another letter costs at least r lambda + 2.
                if (t + 1) as f64 * self.lambda + 2.0 > self.bound {
                    continue;
                }
            } else if ntr > self.bound {
                // Letters are ordered, but traces are not monotone in the
                // letter; keep scanning.
                continue;
            }
            let ne = exact.zip(letter.exact).map(|(a, b)| mat_mul_exact(&a, &b));
            word.push(i);
            self.visit(word, new_p, nm, ne);
            word.pop();
        }
    }
}

/// Enumerates the primitive hyperbolic conjugacy classes of `grp` with
/// trace at most `trace_bound` and at most `max_word_len` syllables.
pub fn enumerate_classes(grp: HeckeGroup, max_word_len: usize, trace_bound: f64) -> Result<Enumeration> {
    if max_word_len < 1 {
        return Err(Error::domain("enumerate_classes", "max_word_len must be >= 1"));
    }
    if !(trace_bound > 2.0) || !trace_bound.is_finite() {
        return Err(Error::domain(
            "enumerate_classes",
            format!("trace_bound must be finite and > 2, got {trace_bound}"),
        ));
    }
    let letters = alphabet(grp, trace_bound);
    let lambda = grp.lambda();

    // Shard on the first letter; each shard is an independent DFS.
    let shards: Vec<(Vec<ClassRecord>, f64)> = (0..letters.len())
        .into_par_iter()
        .map(|i| {
            let mut search = Search {
                letters: &letters,
                max_len: max_word_len,
                bound: trace_bound,
                lambda,
                found: Vec::new(),
                overflow_bound: f64::INFINITY,
            };
            let l = letters[i];
            if l.parabolic || l.m[0] + l.m[3] <= trace_bound {
                search.visit(&mut vec![i], 1, l.m, l.exact);
            }
            (search.found, search.overflow_bound)
        })
        .collect();

    let mut classes = Vec::new();
    let mut overflow = f64::INFINITY;
    for (found, ob) in shards {
        classes.extend(found);
        overflow = overflow.min(ob);
    }
    classes.sort_by(|a, b| {
        let ta = a.exact_trace.map_or(a.trace, |t| t as f64);
        let tb = b.exact_trace.map_or(b.trace, |t| t as f64);
        ta.total_cmp(&tb).then_with(|| a.syllables.cmp(&b.syllables))
    });

    let mut warnings = Vec::new();
    for c in &classes {
        if let Some(e) = c.exact_trace {
            if (c.trace - e as f64).abs() > TRACE_TOLERANCE * c.trace {
                warnings.push(format!(
                    "class {:?}: float trace {} drifted from exact trace {e}",
                    c.syllables, c.trace
                ));
            }
        }
    }
    for w in classes.windows(2) {
        let (ta, tb) = (w[0].trace, w[1].trace);
        let gap = (tb - ta).abs();
        if gap > 1e-12 * tb && gap <= TRACE_TOLERANCE * tb {
            warnings.push(format!(
                "classes {:?} and {:?} have traces {ta} and {tb}, within the {TRACE_TOLERANCE:e} \
                 grouping tolerance but not equal; they share one spectrum entry",
                w[0].syllables, w[1].syllables
            ));
        }
    }

    Ok(Enumeration {
        group: grp,
        max_word_len,
        trace_bound,
        trace_radius: trace_bound.min(overflow),
        classes,
        warnings,
    })
}

/// Truncated primitive length spectrum of `grp` (see [`enumerate_classes`]).
pub fn enumerate_length_spectrum(
    grp: HeckeGroup,
    max_word_len: usize,
    trace_bound: f64,
) -> Result<LengthSpectrum> {
    enumerate_classes(grp, max_word_len, trace_bound)?.spectrum()
}

/// Truncated length spectrum of the limit group `<S, [[1,2],[0,1]]>`.
pub fn limit_group_spectrum(max_word_len: usize, trace_bound: f64) -> Result<LengthSpectrum> {
    enumerate_length_spectrum(HeckeGroup::Limit, max_word_len, trace_bound)
}

/// Surface data of `H / grp` with the order-`N` cone flagged as
/// degenerating.
pub fn hecke_surface(grp: HeckeGroup, spectrum: LengthSpectrum) -> Result<SurfaceData> {
    SurfaceData::new(grp.signature(), spectrum, grp.degenerating_orders())
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    group: HeckeGroup,
    max_word_len: usize,
    trace_bound: f64,
    spectrum: Vec<(f64, u64)>,
    completeness_radius: f64,
    trace_radius: f64,
    warnings: Vec<String>,
}

/// Directory of cached spectra keyed by `(group, max_word_len, trace_bound)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCache {
    dir: PathBuf,
}

/// A spectrum together with the enumeration's warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct CachedSpectrum {
    pub spectrum: LengthSpectrum,
    pub trace_radius: f64,
    pub warnings: Vec<String>,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache in `$HYPERHEAT_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, grp: HeckeGroup, max_word_len: usize, trace_bound: f64) -> PathBuf {
        self.dir.join(format!(
            "hecke-v{CACHE_VERSION}-{}-L{max_word_len}-B{:016x}.json",
            grp.label(),
            trace_bound.to_bits()
        ))
    }

    /// Loads the spectrum if cached (and of the current version), otherwise
    /// enumerates and stores it.
    pub fn get_or_compute(
        &self,
        grp: HeckeGroup,
        max_word_len: usize,
        trace_bound: f64,
    ) -> Result<CachedSpectrum> {
        let path = self.path_for(grp, max_word_len, trace_bound);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(file) = serde_json::from_str::<CacheFile>(&text) {
                if file.version == CACHE_VERSION
                    && file.group == grp
                    && file.max_word_len == max_word_len
                    && file.trace_bound.to_bits() == trace_bound.to_bits()
                {
                    return Ok(CachedSpectrum {
                        spectrum: LengthSpectrum::new(file.spectrum, file.completeness_radius)?,
                        trace_radius: file.trace_radius,
                        warnings: file.warnings,
                    });
                }
            }
        }
        let e = enumerate_classes(grp, max_word_len, trace_bound)?;
        let spectrum = e.spectrum()?;
        let file = CacheFile {
            version: CACHE_VERSION,
            group: grp,
            max_word_len,
            trace_bound,
            spectrum: spectrum.entries().to_vec(),
            completeness_radius: spectrum.completeness_radius(),
            trace_radius: e.trace_radius,
            warnings: e.warnings.clone(),
        };
        std::fs::create_dir_all(&self.dir)?;
        // Write then rename so a concurrent reader never sees half a file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_string(&file)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(CachedSpectrum {
            spectrum,
            trace_radius: e.trace_radius,
            warnings: e.warnings,
        })
    }
}

/// Spectrum of `grp` through `cache` when one is given.
pub fn spectrum_with_cache(
    grp: HeckeGroup,
    max_word_len: usize,
    trace_bound: f64,
    cache: Option<&SpectrumCache>,
) -> Result<CachedSpectrum> {
    match cache {
        Some(c) => c.get_or_compute(grp, max_word_len, trace_bound),
        None => {
            let e = enumerate_classes(grp, max_word_len, trace_bound)?;
            Ok(CachedSpectrum {
                spectrum: e.spectrum()?,
                trace_radius: e.trace_radius,
                warnings: e.warnings,
            })
        }
    }
}
