//! Constrained spin-chain Hilbert spaces: configuration words, constraint
//! predicates, basis enumeration and exact dimension counting.
//!
//! A basis vertex is an N-bit occupation word (site `i` maps to bit `i`,
//! bit value 1 means the site is excited). Constraint families select which
//! words exist; all built-in families are downward closed (removing an
//! excitation never leaves the space), so every basis here is a daisy cube.

use fnv::FnvHashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, ScarError};

/// Hard cap on materialized basis sizes.
pub const ENUMERATION_CAP: u64 = 50_000_000;

/// One basis vertex: an N-bit occupation word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    bits: u64,
    n_sites: u8,
}

impl SpinConfig {
    pub fn new(bits: u64, n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > 63 {
            return Err(ScarError::invalid(format!(
                "n_sites must be in 1..=63, got {n_sites}"
            )));
        }
        if bits >> n_sites != 0 {
            return Err(ScarError::invalid(format!(
                "bits {bits:#b} has set bits at position >= {n_sites}"
            )));
        }
        Ok(SpinConfig {
            bits,
            n_sites: n_sites as u8,
        })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn bit(&self, site: usize) -> bool {
        debug_assert!(site < self.n_sites());
        (self.bits >> site) & 1 == 1
    }

    pub fn excitation_count(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn flipped(&self, site: usize) -> SpinConfig {
        debug_assert!(site < self.n_sites());
        SpinConfig {
            bits: self.bits ^ (1 << site),
            n_sites: self.n_sites,
        }
    }

    /// Translation T: site i -> site (i + shift) mod N.
    pub fn translated(&self, shift: usize) -> SpinConfig {
        SpinConfig {
            bits: rotl(self.bits, shift % self.n_sites(), self.n_sites()),
            n_sites: self.n_sites,
        }
    }

    /// Spatial inversion: site i -> site N-1-i.
    pub fn reflected(&self) -> SpinConfig {
        let n = self.n_sites();
        let mut out = 0u64;
        for i in 0..n {
            if (self.bits >> i) & 1 == 1 {
                out |= 1 << (n - 1 - i);
            }
        }
        SpinConfig {
            bits: out,
            n_sites: self.n_sites,
        }
    }

    /// Componentwise partial order: true iff every excitation of `self`
    /// is also present in `other`.
    pub fn is_subset_of(&self, other: &SpinConfig) -> bool {
        self.bits & !other.bits == 0
    }

    /// The Neel state |1010...> (excitations on even sites). N must be even.
    pub fn neel(n_sites: usize) -> Result<Self> {
        if n_sites % 2 != 0 {
            return Err(ScarError::invalid("Neel state needs even N"));
        }
        Self::z_state(n_sites, 2)
    }

    /// |Z_p>: one excitation every `p` sites starting at site 0.
    pub fn z_state(n_sites: usize, period: usize) -> Result<Self> {
        if period == 0 || n_sites % period != 0 {
            return Err(ScarError::invalid(format!(
                "|Z_{period}> needs {period} | N, got N={n_sites}"
            )));
        }
        let mut bits = 0u64;
        let mut i = 0;
        while i < n_sites {
            bits |= 1 << i;
            i += period;
        }
        SpinConfig::new(bits, n_sites)
    }

    /// Parse a bitstring with site 0 as the leftmost character.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(ScarError::invalid(format!("bad bitstring char '{c}'"))),
            }
        }
        SpinConfig::new(bits, n)
    }
}

impl std::fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n_sites() {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{self}>")
    }
}

fn mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn rotl(b: u64, s: usize, n: usize) -> u64 {
    if s == 0 {
        return b;
    }
    ((b << s) | (b >> (n - s))) & mask(n)
}

fn rotr(b: u64, s: usize, n: usize) -> u64 {
    if s == 0 {
        return b;
    }
    ((b >> s) | (b << (n - s))) & mask(n)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Which constraint family defines the vertex set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModelFamily {
    /// Unconstrained spin-1/2 chain; the graph is the full hypercube.
    Free,
    /// No two adjacent excitations.
    Pxp,
    /// No excitation within `d` sites of another (d = 1 is PXP).
    Blockade(u32),
    /// Excitations forbidden at odd separations up to 2r-1 (r = 1 is PXP);
    /// large r turns into the two-hypercube constraint.
    RRange(u32),
    /// At most k excitations in any window of k+1 consecutive sites
    /// (k = 1 is PXP, large k approaches Free).
    Kk(u32),
    /// Excitations confined to a single sublattice; two N/2-cubes sharing
    /// the polarised vertex.
    TwoHypercube,
    /// Excitations confined to a single residue class mod d+1; d+1 cubes of
    /// dimension N/(d+1) sharing the polarised vertex.
    StarHypercubes(u32),
    /// Union of the two pairing hypergrids (every two-site cell in one of
    /// the two pairings avoids the doubly-excited value).
    TwoHypergrid,
    /// Downward closure of an explicit maximal vertex set.
    Custom(Vec<SpinConfig>),
}

impl ModelFamily {
    /// Parse the model grammar `free | pxp | blockade:<d> | rrange:<r> |
    /// kk:<k> | 2hc | star:<d> | 2hg`. The `custom:<file>` form is handled
    /// by the caller (it needs file access).
    pub fn parse_spec(s: &str) -> Result<ModelFamily> {
        let arg = |s: &str, prefix: &str| -> Result<u32> {
            s[prefix.len()..]
                .parse::<u32>()
                .map_err(|_| ScarError::invalid(format!("bad model parameter in '{s}'")))
        };
        match s {
            "free" => Ok(ModelFamily::Free),
            "pxp" => Ok(ModelFamily::Pxp),
            "2hc" => Ok(ModelFamily::TwoHypercube),
            "2hg" => Ok(ModelFamily::TwoHypergrid),
            _ if s.starts_with("blockade:") => {
                let d = arg(s, "blockade:")?;
                if d == 0 {
                    return Err(ScarError::invalid("blockade radius must be >= 1"));
                }
                Ok(ModelFamily::Blockade(d))
            }
            _ if s.starts_with("rrange:") => {
                let r = arg(s, "rrange:")?;
                if r == 0 {
                    return Err(ScarError::invalid("rrange parameter must be >= 1"));
                }
                Ok(ModelFamily::RRange(r))
            }
            _ if s.starts_with("kk:") => {
                let k = arg(s, "kk:")?;
                if k == 0 {
                    return Err(ScarError::invalid("kk parameter must be >= 1"));
                }
                Ok(ModelFamily::Kk(k))
            }
            _ if s.starts_with("star:") => {
                let d = arg(s, "star:")?;
                if d == 0 {
                    return Err(ScarError::invalid("star parameter must be >= 1"));
                }
                Ok(ModelFamily::StarHypercubes(d))
            }
            other => Err(ScarError::invalid(format!("unknown model spec '{other}'"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelFamily::Free => "free".into(),
            ModelFamily::Pxp => "pxp".into(),
            ModelFamily::Blockade(d) => format!("blockade:{d}"),
            ModelFamily::RRange(r) => format!("rrange:{r}"),
            ModelFamily::Kk(k) => format!("kk:{k}"),
            ModelFamily::TwoHypercube => "2hc".into(),
            ModelFamily::StarHypercubes(d) => format!("star:{d}"),
            ModelFamily::TwoHypergrid => "2hg".into(),
            ModelFamily::Custom(_) => "custom".into(),
        }
    }
}

/// Constraint family plus boundary condition. Periodic is the default;
/// open boundaries are supported for dimension counting only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstraintSpec {
    pub family: ModelFamily,
    pub boundary: Boundary,
}

impl ConstraintSpec {
    pub fn new(family: ModelFamily) -> Self {
        ConstraintSpec {
            family,
            boundary: Boundary::Periodic,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    /// Check the divisibility requirements this family places on N.
    pub fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 || n > 63 {
            return Err(ScarError::invalid(format!("N must be in 1..=63, got {n}")));
        }
        match &self.family {
            ModelFamily::TwoHypercube | ModelFamily::TwoHypergrid if n % 2 != 0 => Err(
                ScarError::invalid(format!("{} requires even N", self.family.label())),
            ),
            // the shifted pairing needs the wrap-around cell to exist
            ModelFamily::TwoHypergrid if self.boundary == Boundary::Open => Err(
                ScarError::invalid("2hg is defined for periodic boundaries"),
            ),
            ModelFamily::StarHypercubes(d) if n % (*d as usize + 1) != 0 => {
                Err(ScarError::invalid(format!(
                    "star:{d} requires (d+1) | N, got N={n}"
                )))
            }
            ModelFamily::Custom(maximal) => {
                if maximal.iter().any(|m| m.n_sites() != n) {
                    Err(ScarError::invalid("custom maximal vertices disagree on N"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// True iff `config` violates no constraint clause.
    ///
    /// Pair constraints wrap under periodic boundaries; when an offset wraps
    /// onto the site itself (odd N smaller than the constraint range) the
    /// clause degenerates to forbidding that excitation outright, which is
    /// what makes the small-N counts come out right.
    pub fn allows(&self, config: &SpinConfig) -> Result<bool> {
        if let ModelFamily::Custom(maximal) = &self.family {
            if maximal.iter().any(|m| m.n_sites() != config.n_sites()) {
                return Err(ScarError::invalid("config/spec N mismatch"));
            }
            return Ok(maximal.iter().any(|m| config.is_subset_of(m)));
        }
        let n = config.n_sites();
        let b = config.bits();
        let periodic = self.boundary == Boundary::Periodic;
        let pair_free = |offsets: &mut dyn Iterator<Item = usize>| -> bool {
            for t in offsets {
                if periodic {
                    let tm = t % n;
                    if tm == 0 {
                        if b != 0 {
                            return false;
                        }
                    } else if b & rotl(b, tm, n) != 0 {
                        return false;
                    }
                } else if t < n && b & (b >> t) != 0 {
                    return false;
                }
            }
            true
        };
        Ok(match &self.family {
            ModelFamily::Free => true,
            ModelFamily::Pxp => pair_free(&mut std::iter::once(1)),
            ModelFamily::Blockade(d) => pair_free(&mut (1..=*d as usize)),
            ModelFamily::RRange(r) => pair_free(&mut (0..*r as usize).map(|l| 2 * l + 1)),
            ModelFamily::Kk(k) => {
                // forbid k+1 consecutive excitations; under PBC the run may
                // wrap (the all-ones word wraps into itself for N <= k)
                let mut run = b;
                for j in 1..=*k as usize {
                    run &= if periodic { rotr(b, j % n, n) } else { b >> j };
                    if run == 0 {
                        break;
                    }
                }
                run == 0
            }
            ModelFamily::TwoHypercube => {
                let even = even_sites_mask(n);
                b & even == b || b & !even & mask(n) == b
            }
            ModelFamily::StarHypercubes(d) => {
                let p = *d as usize + 1;
                (0..p).any(|s| b & !residue_mask(n, p, s) == 0)
            }
            ModelFamily::TwoHypergrid => {
                let adj = if periodic {
                    b & rotl(b, 1, n)
                } else {
                    b & (b >> 1)
                };
                let even = even_sites_mask(n);
                adj & even == 0 || adj & !even & mask(n) == 0
            }
            ModelFamily::Custom(_) => unreachable!(),
        })
    }
}

fn even_sites_mask(n: usize) -> u64 {
    let mut m = 0u64;
    let mut i = 0;
    while i < n {
        m |= 1 << i;
        i += 2;
    }
    m
}

fn residue_mask(n: usize, period: usize, residue: usize) -> u64 {
    let mut m = 0u64;
    let mut i = residue;
    while i < n {
        m |= 1 << i;
        i += period;
    }
    m
}

/// Ordered constrained configuration list with reverse index lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    n_sites: u8,
    configs: Vec<u64>,
    index: FnvHashMap<u64, u32>,
}

impl Basis {
    fn from_sorted(n_sites: usize, configs: Vec<u64>) -> Self {
        debug_assert!(configs.windows(2).all(|w| w[0] < w[1]));
        let index = configs
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, i as u32))
            .collect();
        Basis {
            n_sites: n_sites as u8,
            configs,
            index,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn config(&self, i: usize) -> SpinConfig {
        SpinConfig {
            bits: self.configs[i],
            n_sites: self.n_sites,
        }
    }

    pub fn bits(&self, i: usize) -> u64 {
        self.configs[i]
    }

    pub fn index_of(&self, bits: u64) -> Option<u32> {
        self.index.get(&bits).copied()
    }

    pub fn contains(&self, bits: u64) -> bool {
        self.index.contains_key(&bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.configs.iter().copied()
    }

    /// Downward closure of a maximal vertex set, as a materialized basis.
    pub fn from_maximal_set(n_sites: usize, maximal: &[u64]) -> Result<Self> {
        if n_sites == 0 || n_sites > 63 {
            return Err(ScarError::invalid("N must be in 1..=63"));
        }
        let mut seen = fnv::FnvHashSet::default();
        for &m in maximal {
            if m >> n_sites != 0 {
                return Err(ScarError::invalid("maximal vertex out of range"));
            }
            // iterate all subsets of m
            let mut s = m;
            loop {
                seen.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            if seen.len() as u64 > ENUMERATION_CAP {
                return Err(ScarError::resource("downward closure exceeds cap"));
            }
        }
        let mut configs: Vec<u64> = seen.into_iter().collect();
        configs.sort_unstable();
        Ok(Basis::from_sorted(n_sites, configs))
    }
}

/// Materialize the vertex set of a constraint spec.
pub fn enumerate_basis(spec: &ConstraintSpec, n: usize) -> Result<Basis> {
    spec.check_n(n)?;
    if n > 32 {
        return Err(ScarError::resource(format!(
            "enumeration scans 2^N words; N={n} exceeds the budget"
        )));
    }
    if let Ok(dim) = hilbert_dimension(spec, n) {
        if dim > BigUint::from(ENUMERATION_CAP) {
            return Err(ScarError::resource(format!(
                "dimension {dim} exceeds enumeration cap"
            )));
        }
    }
    let mut configs = Vec::new();
    for b in 0..(1u64 << n) {
        let c = SpinConfig {
            bits: b,
            n_sites: n as u8,
        };
        if spec.allows(&c)? {
            configs.push(b);
        }
    }
    Ok(Basis::from_sorted(n, configs))
}

/// Transfer matrix encoding how allowed configurations extend by one site.
/// Row/column classes follow the conventions that make the dimension come
/// out as Tr[M^N B].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    pub size: usize,
    entries: Vec<u8>,
}

impl TransferMatrix {
    fn zeros(size: usize) -> Self {
        TransferMatrix {
            size,
            entries: vec![0; size * size],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.size + j]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.entries[i * self.size + j] = 1;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.size)
            .map(|i| self.entries[i * self.size..(i + 1) * self.size].to_vec())
            .collect()
    }

    /// Exact dimension count Tr[M^N B]: the trace of M^N for periodic
    /// boundaries, or (row of ones) M^N e_1 for open ones (class 1 being
    /// the "no pending constraint" class).
    pub fn dimension(&self, n: usize, boundary: Boundary) -> BigUint {
        let s = self.size;
        let mut cols: Vec<Vec<BigUint>> = match boundary {
            // track full matrix for the trace
            Boundary::Periodic => (0..s)
                .map(|j| {
                    (0..s)
                        .map(|i| {
                            if i == j {
                                BigUint::one()
                            } else {
                                BigUint::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
            Boundary::Open => vec![(0..s)
                .map(|i| if i == 0 { BigUint::one() } else { BigUint::zero() })
                .collect()],
        };
        for _ in 0..n {
            for col in cols.iter_mut() {
                let mut next = vec![BigUint::zero(); s];
                for i in 0..s {
                    for j in 0..s {
                        if self.get(i, j) == 1 && !col[j].is_zero() {
                            next[i] += &col[j];
                        }
                    }
                }
                *col = next;
            }
        }
        match boundary {
            Boundary::Periodic => (0..s).map(|i| cols[i][i].clone()).sum(),
            Boundary::Open => cols[0].iter().sum(),
        }
    }

    /// Dominant eigenvalue by power iteration.
    pub fn dominant_eigenvalue(&self) -> f64 {
        let s = self.size;
        let mut v = vec![1.0f64; s];
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            let mut w = vec![0.0; s];
            for i in 0..s {
                for j in 0..s {
                    if self.get(i, j) == 1 {
                        w[i] += v[j];
                    }
                }
            }
            let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in w.iter_mut() {
                *x /= norm;
            }
            let mut rayleigh = 0.0;
            for i in 0..s {
                for j in 0..s {
                    if self.get(i, j) == 1 {
                        rayleigh += w[i] * w[j];
                    }
                }
            }
            let num: f64 = w.iter().map(|x| x * x).sum();
            let next = rayleigh / num;
            if (next - lambda).abs() < 1e-14 {
                return next;
            }
            lambda = next;
            v = w;
        }
        lambda
    }
}

/// The transfer matrix of a supported family, sized 2x2 for PXP,
/// (d+1)x(d+1) for blockade radius d, 2r x 2r for the r-range family and
/// 2^k x 2^k for the (k,k+1) family.
pub fn transfer_matrix(spec: &ConstraintSpec) -> Result<TransferMatrix> {
    match &spec.family {
        ModelFamily::Pxp => transfer_matrix(&ConstraintSpec {
            family: ModelFamily::Kk(1),
            boundary: spec.boundary,
        }),
        ModelFamily::Blockade(d) => {
            let d = *d as usize;
            let mut m = TransferMatrix::zeros(d + 1);
            m.set(0, 0);
            m.set(d, 0);
            for i in 0..d {
                m.set(i, i + 1);
            }
            Ok(m)
        }
        ModelFamily::RRange(r) => {
            let r = *r as usize;
            let s = 2 * r;
            let mut m = TransferMatrix::zeros(s);
            // class 1: no excitation within reach; class j+1: most recent
            // excitation j sites back
            m.set(0, 0);
            m.set(0, s - 1);
            for j in 0..s - 1 {
                m.set(j + 1, j);
            }
            for l in 1..r {
                m.set(1, 2 * l);
            }
            Ok(m)
        }
        ModelFamily::Kk(k) => {
            let k = *k as usize;
            if k > 16 {
                return Err(ScarError::resource("kk transfer matrix needs 2^k classes"));
            }
            let s = 1usize << k;
            let all_ones = s - 1;
            let mut m = TransferMatrix::zeros(s);
            // classes are the patterns of the trailing k sites; appending a
            // bit shifts the window, and appending 1 to the all-ones window
            // is the one forbidden move
            for new in 0..s {
                for top in [0usize, s >> 1] {
                    let old = (new >> 1) | top;
                    if old == all_ones && new & 1 == 1 {
                        continue;
                    }
                    m.set(new, old);
                }
            }
            Ok(m)
        }
        other => Err(ScarError::unsupported(format!(
            "no transfer matrix for {}",
            other.label()
        ))),
    }
}

/// Linear recurrence for the Hilbert-space dimension, with boundary-specific
/// initial values.
#[derive(Clone, Debug)]
pub struct DimensionRecurrence {
    /// D_N = sum_j coeffs[j-1] * D_{N-j}
    pub coeffs: Vec<i64>,
    pub initial_pbc: Vec<BigInt>,
    pub initial_obc: Vec<BigInt>,
    /// Coefficients of the characteristic polynomial
    /// x^m - c_1 x^{m-1} - ... - c_m, highest power first.
    pub char_poly: Vec<i64>,
}

impl DimensionRecurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, n: usize, boundary: Boundary) -> BigUint {
        let init = match boundary {
            Boundary::Periodic => &self.initial_pbc,
            Boundary::Open => &self.initial_obc,
        };
        if n == 0 {
            return BigUint::one();
        }
        if n <= init.len() {
            return init[n - 1].to_biguint().expect("dimension is positive");
        }
        let m = self.order();
        let mut window: Vec<BigInt> = init.clone();
        for _ in init.len()..n {
            let len = window.len();
            let mut next = BigInt::zero();
            for (j, &c) in self.coeffs.iter().enumerate() {
                next += c * &window[len - 1 - j];
            }
            window.push(next);
            if window.len() > m + 1 {
                window.remove(0);
            }
        }
        window
            .last()
            .unwrap()
            .to_biguint()
            .expect("dimension is positive")
    }

    /// Limit ratio D_N / D_{N-1}, evaluated at finite N through the
    /// recurrence itself.
    pub fn ratio_at(&self, n: usize, boundary: Boundary) -> f64 {
        let a = self.evaluate(n, boundary);
        let b = self.evaluate(n - 1, boundary);
        big_ratio(&a, &b)
    }
}

fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let scaled = (a << 64usize) / b;
    scaled.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64)
}

/// Natural log of a big integer.
pub fn big_ln(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 52 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 52;
    let top = (v >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// The recurrence and initial values for the transfer-matrix families.
pub fn dimension_recurrence(spec: &ConstraintSpec) -> Result<DimensionRecurrence> {
    let big = |v: u64| BigInt::from(v);
    let rec = |coeffs: Vec<i64>, pbc: Vec<BigInt>, obc: Vec<BigInt>| {
        let mut cp = vec![1i64];
        cp.extend(coeffs.iter().map(|c| -c));
        DimensionRecurrence {
            coeffs,
            initial_pbc: pbc,
            initial_obc: obc,
            char_poly: cp,
        }
    };
    match &spec.family {
        ModelFamily::Pxp => Ok(rec(
            vec![1, 1],
            vec![big(1), big(3)],
            vec![big(2), big(3)],
        )),
        ModelFamily::Blockade(d) => {
            let d = *d as usize;
            let mut coeffs = vec![0i64; d + 1];
            coeffs[0] = 1;
            coeffs[d] = 1;
            let mut pbc: Vec<BigInt> = (1..=d).map(|_| big(1)).collect();
            pbc.push(big(d as u64 + 2));
            let obc: Vec<BigInt> = (1..=d as u64 + 1).map(|n| big(n + 1)).collect();
            Ok(rec(coeffs, pbc, obc))
        }
        ModelFamily::RRange(r) => {
            let r = *r as usize;
            let mut coeffs = vec![1i64, 1];
            for j in 3..=2 * r {
                coeffs.push(if j % 2 == 0 { 1 } else { -1 });
            }
            let pbc: Vec<BigInt> = (1..=2 * r)
                .map(|n| {
                    if n % 2 == 1 {
                        big(1)
                    } else {
                        big((1u64 << (n / 2 + 1)) - 1)
                    }
                })
                .collect();
            let obc: Vec<BigInt> = (1..=2 * r)
                .map(|n| {
                    let m = n.div_ceil(2);
                    big((1u64 << m) + (1u64 << (n - m)) - 1)
                })
                .collect();
            Ok(rec(coeffs, pbc, obc))
        }
        ModelFamily::Kk(k) => {
            let k = *k as usize;
            let coeffs = vec![1i64; k + 1];
            let mut pbc: Vec<BigInt> = (1..=k).map(|n| big((1u64 << n) - 1)).collect();
            pbc.push(big((1u64 << (k + 1)) - 1));
            let mut obc: Vec<BigInt> = (1..=k).map(|n| big(1u64 << n)).collect();
            obc.push(big((1u64 << (k + 1)) - 1));
            Ok(rec(coeffs, pbc, obc))
        }
        other => Err(ScarError::unsupported(format!(
            "no dimension recurrence for {}",
            other.label()
        ))),
    }
}

/// Exact Hilbert-space dimension.
pub fn hilbert_dimension(spec: &ConstraintSpec, n: usize) -> Result<BigUint> {
    spec.check_n(n)?;
    let pow2 = |e: usize| BigUint::one() << e;
    match &spec.family {
        ModelFamily::Free => Ok(pow2(n)),
        ModelFamily::TwoHypercube => match spec.boundary {
            Boundary::Periodic => Ok(pow2(n / 2 + 1) - BigUint::one()),
            Boundary::Open => Err(ScarError::unsupported(
                "two-hypercube dimension is defined for periodic boundaries",
            )),
        },
        ModelFamily::StarHypercubes(d) => match spec.boundary {
            Boundary::Periodic => {
                let p = *d as usize + 1;
                let cube = pow2(n / p) - BigUint::one();
                Ok(cube * BigUint::from(p) + BigUint::one())
            }
            Boundary::Open => Err(ScarError::unsupported(
                "star dimension is defined for periodic boundaries",
            )),
        },
        ModelFamily::TwoHypergrid => match spec.boundary {
            Boundary::Periodic => {
                let pxp = hilbert_dimension(
                    &ConstraintSpec::new(ModelFamily::Pxp),
                    n,
                )?;
                let three_pow = BigUint::from(3u32).pow((n / 2) as u32);
                Ok(BigUint::from(2u32) * three_pow - pxp)
            }
            Boundary::Open => Err(ScarError::unsupported(
                "2hg dimension is defined for periodic boundaries",
            )),
        },
        ModelFamily::Custom(maximal) => {
            let bits: Vec<u64> = maximal.iter().map(|m| m.bits()).collect();
            let basis = Basis::from_maximal_set(n, &bits)?;
            Ok(BigUint::from(basis.len()))
        }
        _ => {
            let rec = dimension_recurrence(spec)?;
            Ok(rec.evaluate(n, spec.boundary))
        }
    }
}

/// Asymptotic growth rate of the dimension: the dominant transfer-matrix
/// eigenvalue where one exists, closed forms otherwise.
pub fn quantum_dimension(spec: &ConstraintSpec) -> Result<f64> {
    match &spec.family {
        ModelFamily::Free => Ok(2.0),
        ModelFamily::TwoHypercube => Ok(std::f64::consts::SQRT_2),
        ModelFamily::StarHypercubes(d) => Ok(2f64.powf(1.0 / (*d as f64 + 1.0))),
        ModelFamily::TwoHypergrid => Ok(3f64.sqrt()),
        ModelFamily::Custom(_) => Err(ScarError::unsupported(
            "quantum dimension of a custom set is not defined",
        )),
        _ => Ok(transfer_matrix(spec)?.dominant_eigenvalue()),
    }
}
