//! EVENODD and RDP array codes: parameters, encoding, augmentation and a
//! brute-force MDS checker.
//!
//! Every column is held as a [`RingPoly`] with `p` coefficients. Stored
//! columns have `p - 1` meaningful rows, so their top coefficient is always
//! zero; augmented columns use all `p` rows.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, ParamError, Result};
use crate::ring::{check_modulus, gcd, QuotientPoly, RingPoly, XorTally};
use crate::vandermonde::determinant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "EVENODD")]
    Evenodd,
    #[serde(rename = "RDP")]
    Rdp,
}

impl Family {
    pub fn tag(self) -> u8 {
        match self {
            Family::Evenodd => 0,
            Family::Rdp => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Family::Evenodd),
            1 => Some(Family::Rdp),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Evenodd => "EVENODD",
            Family::Rdp => "RDP",
        })
    }
}

impl FromStr for Family {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, ParamError> {
        match s.to_ascii_lowercase().as_str() {
            "evenodd" => Ok(Family::Evenodd),
            "rdp" => Ok(Family::Rdp),
            _ => Err(ParamError::Dimension(format!("unknown code family '{s}'"))),
        }
    }
}

/// Multiplicative order test: is 2 a generator of `(Z/pZ)*`?
pub fn two_is_primitive(p: usize) -> bool {
    if p < 3 {
        return false;
    }
    let mut x = 1usize;
    for e in 1..p {
        x = x * 2 % p;
        if x == 1 {
            return e == p - 1;
        }
    }
    false
}

/// Validated parameters of EVENODD(p, k, r; g) or RDP(p, k, r; g).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    family: Family,
    p: usize,
    k: usize,
    r: usize,
    g: Vec<usize>,
    mds_mode: bool,
}

impl CodeParams {
    /// Builds and validates parameters; `g = None` selects `(0, 1, 2, ...)`.
    pub fn new(family: Family, p: usize, k: usize, r: usize, g: Option<Vec<usize>>, mds_mode: bool) -> Result<Self, ParamError> {
        let g_len = match family {
            Family::Evenodd => k,
            Family::Rdp => k + 1,
        };
        let params = Self { family, p, k, r, g: g.unwrap_or_else(|| (0..g_len).collect()), mds_mode };
        params.validate()?;
        Ok(params)
    }

    pub fn evenodd(p: usize, k: usize, r: usize) -> Result<Self, ParamError> {
        Self::new(Family::Evenodd, p, k, r, None, true)
    }

    pub fn rdp(p: usize, k: usize, r: usize) -> Result<Self, ParamError> {
        Self::new(Family::Rdp, p, k, r, None, true)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let Self { family, p, k, r, ref g, mds_mode } = *self;
        check_modulus(p)?;
        if k == 0 || r == 0 {
            return Err(ParamError::EmptyCode { k, r });
        }
        let bound = match family {
            Family::Evenodd => k.max(r),
            Family::Rdp => (k + 1).max(r),
        };
        if p < bound {
            return Err(ParamError::ModulusTooSmall { p, bound });
        }
        if g.len() != self.g_len() {
            return Err(ParamError::GLength { expected: self.g_len(), got: g.len() });
        }
        for (i, &v) in g.iter().enumerate() {
            if v >= p {
                return Err(ParamError::GOutOfRange { value: v, p });
            }
            if g[..i].contains(&v) {
                return Err(ParamError::GRepeated(v));
            }
        }
        if mds_mode {
            let top = self.g_len() - 1;
            if let Some(&v) = g.iter().find(|&&v| v > top) {
                return Err(ParamError::GAboveMdsBound { value: v, bound: top });
            }
            for (i, &a) in g.iter().enumerate() {
                for &b in &g[i + 1..] {
                    if gcd(a.abs_diff(b), p) != 1 {
                        return Err(ParamError::ExponentsNotCoprime { a, b, p });
                    }
                }
            }
            // with at most three parity columns every minor is a product of
            // binomials x^a + x^b, which coprime differences already make invertible
            if r >= 4 && !two_is_primitive(p) {
                return Err(ParamError::TwoNotPrimitive(p));
            }
        }
        Ok(())
    }

    /// `validate` plus the optional cap of eight parity columns for MDS use.
    pub fn validate_strict(&self) -> Result<(), ParamError> {
        self.validate()?;
        if self.mds_mode && self.r > 8 {
            return Err(ParamError::Dimension(format!("r={} exceeds 8 parity columns", self.r)));
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn g(&self) -> &[usize] {
        &self.g
    }

    pub fn mds_mode(&self) -> bool {
        self.mds_mode
    }

    /// Total number of columns `k + r`.
    pub fn n(&self) -> usize {
        self.k + self.r
    }

    /// Stored rows per column.
    pub fn rows(&self) -> usize {
        self.p - 1
    }

    fn g_len(&self) -> usize {
        match self.family {
            Family::Evenodd => self.k,
            Family::Rdp => self.k + 1,
        }
    }

    /// Shift applied to column `j` in parity column `k + l`.
    pub(crate) fn shift_of(&self, j: usize, l: usize) -> usize {
        l * self.g[j] % self.p
    }

    /// XORs charged for evaluating parity column `k + l` from its defining
    /// equation, counting only terms that are not structurally zero.
    pub fn parity_column_cost(&self, l: usize) -> u64 {
        let (p, k) = (self.p, self.k);
        if l == 0 {
            return ((k - 1) * (p - 1)) as u64;
        }
        let summed = match self.family {
            Family::Evenodd => k,
            Family::Rdp => k + 1,
        };
        let shifts: Vec<usize> = (0..summed).map(|j| self.shift_of(j, l)).collect();
        // the adjuster sums the imaginary-row bits that land on row p-1
        let adjuster_terms = match self.family {
            Family::Evenodd => shifts.iter().filter(|&&s| s != 0).count(),
            Family::Rdp => 0,
        };
        let mut cost = adjuster_terms.saturating_sub(1);
        for i in 0..p - 1 {
            // column j contributes row (i - s) which is imaginary when i == s - 1
            let live = shifts.iter().filter(|&&s| (s + p - 1) % p != i).count();
            cost += (live + usize::from(adjuster_terms > 0)).saturating_sub(1);
        }
        cost as u64
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.g.iter().map(usize::to_string).collect();
        write!(f, "{}({},{},{};({}))", self.family, self.p, self.k, self.r, g.join(","))
    }
}

fn check_columns(params: &CodeParams, cols: &[RingPoly], expected: usize, stored: bool) -> Result<()> {
    if cols.len() != expected {
        return Err(ParamError::Dimension(format!("expected {expected} columns, got {}", cols.len())).into());
    }
    if let Some(c) = cols.iter().find(|c| c.p() != params.p) {
        return Err(ParamError::ModulusMismatch { left: params.p, right: c.p() }.into());
    }
    if stored {
        if let Some(j) = cols.iter().position(RingPoly::top) {
            return Err(Error::Input(format!("stored column {j} has a bit in row p-1")));
        }
    }
    Ok(())
}

/// A stored stripe: `k + r` columns of `p - 1` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordArray {
    params: CodeParams,
    columns: Vec<RingPoly>,
}

impl CodewordArray {
    pub fn from_columns(params: &CodeParams, columns: Vec<RingPoly>) -> Result<Self> {
        check_columns(params, &columns, params.n(), true)?;
        Ok(Self { params: params.clone(), columns })
    }

    /// Builds a stripe from a row-major `(p-1) x (k+r)` bit grid.
    pub fn from_rows(params: &CodeParams, rows: &[Vec<bool>]) -> Result<Self> {
        if rows.len() != params.rows() || rows.iter().any(|r| r.len() != params.n()) {
            return Err(ParamError::Dimension(format!("grid must be {}x{}", params.rows(), params.n())).into());
        }
        let columns = (0..params.n()).map(|j| RingPoly::from_coeffs(params.p, rows.iter().map(|r| r[j]))).collect();
        Self::from_columns(params, columns)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn columns(&self) -> &[RingPoly] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<RingPoly> {
        self.columns
    }

    pub fn column(&self, j: usize) -> &RingPoly {
        &self.columns[j]
    }

    pub fn info(&self) -> &[RingPoly] {
        &self.columns[..self.params.k]
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.columns[j].bit(i)
    }
}

/// A `p x (k+r)` augmented stripe whose parity columns are pure sums of
/// cyclically shifted columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedArray {
    params: CodeParams,
    columns: Vec<RingPoly>,
}

impl AugmentedArray {
    pub fn from_columns(params: &CodeParams, columns: Vec<RingPoly>) -> Result<Self> {
        check_columns(params, &columns, params.n(), false)?;
        Ok(Self { params: params.clone(), columns })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn columns(&self) -> &[RingPoly] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &RingPoly {
        &self.columns[j]
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.columns[j].bit(i)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.columns[j].flip(i);
    }
}

/// Uncounted sum of `x^(l g(j)) * column_j` over the given columns.
fn shifted_sum(params: &CodeParams, cols: &[&RingPoly], l: usize) -> RingPoly {
    let mut acc = RingPoly::zero(params.p);
    for (j, c) in cols.iter().enumerate() {
        acc.xor_words(&c.shift(params.shift_of(j, l) as i64));
    }
    acc
}

fn row_parity(params: &CodeParams, info: &[RingPoly]) -> RingPoly {
    let mut acc = RingPoly::zero(params.p);
    for c in info {
        acc.xor_words(c);
    }
    acc
}

/// Stored parity column `k + l` computed from the information columns.
///
/// For RDP with `l >= 1`, `row_parity` supplies column `k` if it is already
/// known; otherwise it is recomputed and charged.
pub(crate) fn parity_column(
    params: &CodeParams,
    info: &[RingPoly],
    row_parity_col: Option<&RingPoly>,
    l: usize,
    tally: &mut XorTally,
) -> RingPoly {
    let mut out = if l == 0 {
        row_parity(params, info)
    } else {
        match params.family {
            Family::Evenodd => {
                let cols: Vec<&RingPoly> = info.iter().collect();
                let mut s = shifted_sum(params, &cols, l);
                if s.top() {
                    s.xor_words(&RingPoly::all_ones(params.p));
                }
                s
            }
            Family::Rdp => {
                let owned;
                let rp = match row_parity_col {
                    Some(c) => c,
                    None => {
                        owned = parity_column(params, info, None, 0, tally);
                        &owned
                    }
                };
                let cols: Vec<&RingPoly> = info.iter().chain(std::iter::once(rp)).collect();
                shifted_sum(params, &cols, l)
            }
        }
    };
    out.set_bit(params.p - 1, false);
    tally.charge(params.parity_column_cost(l));
    out
}

fn encode(params: &CodeParams, info: &[RingPoly], tally: &mut XorTally) -> Result<CodewordArray> {
    check_columns(params, info, params.k, true)?;
    let mut columns = info.to_vec();
    let rp = parity_column(params, info, None, 0, tally);
    columns.push(rp.clone());
    for l in 1..params.r {
        columns.push(parity_column(params, info, Some(&rp), l, tally));
    }
    Ok(CodewordArray { params: params.clone(), columns })
}

fn require_family(params: &CodeParams, family: Family) -> Result<()> {
    if params.family != family {
        return Err(ParamError::Dimension(format!("{params} is not an {family} code")).into());
    }
    Ok(())
}

/// Row parity and `r - 1` adjusted diagonal parities. Costs
/// `(k-1)(p-1) + (r-1)(kp-k-1)` when `g` contains zero.
pub fn encode_evenodd(params: &CodeParams, info: &[RingPoly], tally: &mut XorTally) -> Result<CodewordArray> {
    require_family(params, Family::Evenodd)?;
    encode(params, info, tally)
}

/// Row parity and `r - 1` diagonal parities that include the row-parity
/// column. Costs `(k-1)(p-1) + (r-1)k(p-2)` when `g` contains zero.
pub fn encode_rdp(params: &CodeParams, info: &[RingPoly], tally: &mut XorTally) -> Result<CodewordArray> {
    require_family(params, Family::Rdp)?;
    encode(params, info, tally)
}

pub fn encode_any(params: &CodeParams, info: &[RingPoly], tally: &mut XorTally) -> Result<CodewordArray> {
    encode(params, info, tally)
}

/// Parity columns `k + l` for each `l` in `which`, from full information.
pub fn reencode_parity(
    params: &CodeParams,
    info: &[RingPoly],
    row_parity_col: Option<&RingPoly>,
    which: &[usize],
    tally: &mut XorTally,
) -> Result<Vec<RingPoly>> {
    check_columns(params, info, params.k, true)?;
    if let Some(&l) = which.iter().find(|&&l| l >= params.r) {
        return Err(ParamError::Dimension(format!("parity index {l} is not below r={}", params.r)).into());
    }
    Ok(which.iter().map(|&l| parity_column(params, info, row_parity_col, l, tally)).collect())
}

/// Sum of the `p - 1` stored bits of the row-parity column; `p - 2` XORs.
pub(crate) fn evenodd_row_parity_sum(params: &CodeParams, col_k: &RingPoly, tally: &mut XorTally) -> bool {
    tally.charge(params.p as u64 - 2);
    col_k.parity_at_one()
}

/// Augments one stored EVENODD diagonal parity column given the row-parity
/// sum: `2(p - 1)` XORs.
pub(crate) fn augment_evenodd_column(params: &CodeParams, col: &RingPoly, row_sum: bool, tally: &mut XorTally) -> RingPoly {
    let p = params.p;
    let top = row_sum ^ col.parity_at_one();
    tally.charge(2 * (p as u64 - 1));
    let mut out = col.clone();
    if top {
        out.xor_words(&RingPoly::all_ones(p));
    }
    out
}

/// Augments one stored RDP parity column by its column sum: `p - 2` XORs.
pub(crate) fn augment_rdp_column(params: &CodeParams, col: &RingPoly, tally: &mut XorTally) -> RingPoly {
    tally.charge(params.p as u64 - 2);
    let mut out = col.clone();
    out.set_bit(params.p - 1, col.parity_at_one());
    out
}

/// Augments the EVENODD parity columns `k + l` for `l` in `which`; other
/// columns are copied. Column `k` is needed for the adjuster.
pub fn augment_evenodd_subset(c: &CodewordArray, which: &[usize], tally: &mut XorTally) -> Result<AugmentedArray> {
    let params = &c.params;
    require_family(params, Family::Evenodd)?;
    let mut columns = c.columns.clone();
    let s = evenodd_row_parity_sum(params, &columns[params.k], tally);
    for &l in which.iter().filter(|&&l| l >= 1) {
        let j = params.k + l;
        columns[j] = augment_evenodd_column(params, &columns[j], s, tally);
    }
    Ok(AugmentedArray { params: params.clone(), columns })
}

pub fn augment_evenodd(c: &CodewordArray, tally: &mut XorTally) -> Result<AugmentedArray> {
    let all: Vec<usize> = (1..c.params.r).collect();
    augment_evenodd_subset(c, &all, tally)
}

pub fn augment_rdp(c: &CodewordArray, tally: &mut XorTally) -> Result<AugmentedArray> {
    let params = &c.params;
    require_family(params, Family::Rdp)?;
    let mut columns = c.columns.clone();
    for j in params.k + 1..params.n() {
        columns[j] = augment_rdp_column(params, &columns[j], tally);
    }
    Ok(AugmentedArray { params: params.clone(), columns })
}

pub fn augment(c: &CodewordArray, tally: &mut XorTally) -> Result<AugmentedArray> {
    match c.params.family {
        Family::Evenodd => augment_evenodd(c, tally),
        Family::Rdp => augment_rdp(c, tally),
    }
}

/// Back to the stored form: EVENODD parity columns are reduced modulo
/// `M_p(x)`, RDP parity columns just lose row `p - 1`.
pub fn deaugment(a: &AugmentedArray, tally: &mut XorTally) -> Result<CodewordArray> {
    let params = &a.params;
    if a.columns[..=params.k].iter().any(RingPoly::top) {
        return Err(Error::Input("imaginary row of columns 0..=k is not zero".into()));
    }
    let columns = a
        .columns
        .iter()
        .map(|c| match params.family {
            Family::Evenodd => c.reduce_mod_mp(tally),
            Family::Rdp => {
                let mut c = c.clone();
                c.set_bit(params.p - 1, false);
                c
            }
        })
        .collect();
    Ok(CodewordArray { params: params.clone(), columns })
}

/// Parity polynomials as a product of the information vector with a
/// `k x r` (EVENODD) or `(k+1) x r` (RDP) Vandermonde matrix over `R_p`.
pub fn algebraic_encode(params: &CodeParams, info: &[RingPoly]) -> Result<AugmentedArray> {
    check_columns(params, info, params.k, true)?;
    let p = params.p;
    let mut rows: Vec<RingPoly> = info.to_vec();
    let mut columns = info.to_vec();
    let mut rp = RingPoly::zero(p);
    for c in info {
        rp.xor_words(c);
    }
    if params.family == Family::Rdp {
        rows.push(rp.clone());
    }
    let vm = crate::vandermonde::vandermonde_matrix(p, &params.g, params.r);
    let prod = vm.left_mul(&rows)?;
    columns.push(rp);
    columns.extend(prod.into_iter().skip(1));
    Ok(AugmentedArray { params: params.clone(), columns })
}

/// The RDP-shaped augmented array obtained from EVENODD(p, k+1, r; g) by
/// setting information column `k` to the row sum of columns `0..k` and
/// deleting the (then all-zero) row-parity column `k + 1`.
pub fn shortened_image(evenodd: &CodeParams, info: &[RingPoly]) -> Result<AugmentedArray> {
    require_family(evenodd, Family::Evenodd)?;
    let k = evenodd.k - 1;
    check_columns(evenodd, info, k, true)?;
    let mut extended = info.to_vec();
    extended.push(row_parity(evenodd, info));
    let mut t = XorTally::new();
    let enc = encode_evenodd(evenodd, &extended, &mut t)?;
    let aug = augment_evenodd(&enc, &mut t)?;
    let mut cols = aug.columns;
    if !cols[k + 1].is_zero() {
        return Err(Error::Input("row-parity column of the shortened code is not zero".into()));
    }
    cols.remove(k + 1);
    Ok(AugmentedArray { params: evenodd.clone(), columns: cols })
}

fn check_shortening_pair(evenodd: &CodeParams, rdp: &CodeParams) -> Result<()> {
    require_family(evenodd, Family::Evenodd)?;
    require_family(rdp, Family::Rdp)?;
    if evenodd.p != rdp.p || evenodd.r != rdp.r || evenodd.k != rdp.k + 1 || evenodd.g != rdp.g {
        return Err(ParamError::Dimension(format!("{evenodd} is not the unshortened form of {rdp}")).into());
    }
    Ok(())
}

/// Compares an augmented RDP array against the shortened EVENODD image of
/// its information columns.
pub fn shorten_matches(evenodd: &CodeParams, rdp_augmented: &AugmentedArray) -> Result<bool> {
    check_shortening_pair(evenodd, &rdp_augmented.params)?;
    let image = shortened_image(evenodd, &rdp_augmented.columns[..rdp_augmented.params.k])?;
    Ok(image.columns == rdp_augmented.columns)
}

/// Encodes `info` with both codes and checks that shortening EVENODD
/// reproduces augmented RDP bit for bit.
pub fn shorten_check(evenodd: &CodeParams, rdp: &CodeParams, info: &[RingPoly]) -> Result<bool> {
    check_shortening_pair(evenodd, rdp)?;
    let mut t = XorTally::new();
    let aug = augment_rdp(&encode_rdp(rdp, info, &mut t)?, &mut t)?;
    shorten_matches(evenodd, &aug)
}

/// Outcome of an exhaustive erasure sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdsReport {
    pub mds: bool,
    pub patterns_checked: usize,
    /// First erased-column set that could not be recovered.
    pub witness: Option<Vec<usize>>,
}

/// Coefficient of information column `j` in the residue equation of parity
/// column `k + l`.
pub(crate) fn residue_coefficient(params: &CodeParams, j: usize, l: usize) -> QuotientPoly {
    let p = params.p;
    let mut c = RingPoly::monomial(p, params.shift_of(j, l) as i64);
    if params.family == Family::Rdp && l >= 1 {
        c.xor_words(&RingPoly::monomial(p, params.shift_of(params.k, l) as i64));
    }
    QuotientPoly::reduce(&c)
}

/// `rows x cols` system of residue coefficients, rows indexed by erased
/// information columns and columns by parity offsets `l`.
pub(crate) fn residue_system(params: &CodeParams, info_cols: &[usize], parity_offsets: &[usize]) -> Vec<Vec<QuotientPoly>> {
    info_cols
        .iter()
        .map(|&j| parity_offsets.iter().map(|&l| residue_coefficient(params, j, l)).collect())
        .collect()
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let m = c.len();
    for i in (0..m).rev() {
        if c[i] < n - m + i {
            c[i] += 1;
            for t in i + 1..m {
                c[t] = c[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Erases every set of `r` columns (in lexicographic order, optionally
/// capped) and checks that the matching sub-system is invertible and that
/// random stripes come back exactly through the generic decoder.
pub fn mds_check(params: &CodeParams, max_patterns: Option<usize>, seed: u64) -> Result<MdsReport> {
    let (k, r, n, p) = (params.k, params.r, params.n(), params.p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut erased: Vec<usize> = (0..r).collect();
    let mut checked = 0;
    loop {
        if max_patterns.is_some_and(|m| checked >= m) {
            break;
        }
        checked += 1;
        let info: Vec<usize> = erased.iter().copied().filter(|&j| j < k).collect();
        let surviving: Vec<usize> = (0..r).filter(|l| !erased.contains(&(k + l))).collect();
        let ok = info.is_empty() || {
            let m = residue_system(params, &info, &surviving);
            determinant(&m).inverse().is_some()
        } && (0..2).all(|_| {
            let data: Vec<RingPoly> =
                (0..k).map(|_| RingPoly::from_coeffs(p, (0..p - 1).map(|_| rng.gen::<bool>()))).collect();
            let Ok(cw) = encode(params, &data, &mut XorTally::new()) else { return false };
            let damaged: Vec<Option<RingPoly>> =
                cw.columns.iter().enumerate().map(|(j, c)| (!erased.contains(&j)).then(|| c.clone())).collect();
            crate::decoder::decode_fallback(params, &damaged).is_ok_and(|d| d == cw)
        });
        if !ok {
            return Ok(MdsReport { mds: false, patterns_checked: checked, witness: Some(erased) });
        }
        if !next_combination(&mut erased, n) {
            break;
        }
    }
    Ok(MdsReport { mds: true, patterns_checked: checked, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn impulse(params: &CodeParams, i: usize, j: usize) -> Vec<RingPoly> {
        (0..params.k).map(|c| if c == j { RingPoly::monomial(params.p, i as i64) } else { RingPoly::zero(params.p) }).collect()
    }

    fn col(p: usize, rows: &[i64]) -> RingPoly {
        RingPoly::from_exponents(p, rows)
    }

    fn eo533() -> CodeParams {
        CodeParams::new(Family::Evenodd, 5, 3, 3, Some(vec![0, 1, 4]), false).unwrap()
    }

    fn rdp533() -> CodeParams {
        CodeParams::new(Family::Rdp, 5, 3, 3, Some(vec![0, 1, 4, 3]), false).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(CodeParams::new(Family::Evenodd, 5, 3, 3, Some(vec![0, 1, 2]), true).is_ok());
        assert_eq!(CodeParams::rdp(5, 5, 2).unwrap_err(), ParamError::ModulusTooSmall { p: 5, bound: 6 });
        assert_eq!(
            CodeParams::evenodd(9, 5, 2).unwrap_err(),
            ParamError::ExponentsNotCoprime { a: 0, b: 3, p: 9 }
        );
        assert!(CodeParams::new(Family::Evenodd, 9, 5, 2, None, false).is_ok());
        assert_eq!(CodeParams::evenodd(4, 3, 2).unwrap_err(), ParamError::BadModulus(4));
        assert_eq!(
            CodeParams::new(Family::Evenodd, 5, 3, 2, Some(vec![0, 1]), false).unwrap_err(),
            ParamError::GLength { expected: 3, got: 2 }
        );
        assert_eq!(
            CodeParams::new(Family::Evenodd, 5, 3, 2, Some(vec![0, 1, 1]), false).unwrap_err(),
            ParamError::GRepeated(1)
        );
        assert_eq!(
            CodeParams::new(Family::Evenodd, 5, 3, 2, Some(vec![0, 1, 4]), true).unwrap_err(),
            ParamError::GAboveMdsBound { value: 4, bound: 2 }
        );
        assert_eq!(CodeParams::evenodd(7, 5, 4).unwrap_err(), ParamError::TwoNotPrimitive(7));
        assert!(CodeParams::evenodd(7, 5, 3).is_ok());
    }

    #[test]
    fn primitive_two() {
        let prim: Vec<usize> = (3..30).filter(|&p| two_is_primitive(p)).collect();
        assert_eq!(prim, vec![3, 5, 11, 13, 19, 29]);
    }

    #[test]
    fn evenodd_impulse_encodings() {
        let params = eo533();
        let mut t = XorTally::new();
        let c = encode_evenodd(&params, &impulse(&params, 3, 1), &mut t).unwrap();
        assert_eq!(c.column(3), &col(5, &[3]));
        assert_eq!(c.column(4), &col(5, &[0, 1, 2, 3]));
        assert_eq!(c.column(5), &col(5, &[0]));
        let c = encode_evenodd(&params, &impulse(&params, 0, 0), &mut t).unwrap();
        for j in 3..6 {
            assert_eq!(c.column(j), &col(5, &[0]));
        }
        let zero = encode_evenodd(&params, &vec![RingPoly::zero(5); 3], &mut t).unwrap();
        assert!(zero.columns().iter().all(RingPoly::is_zero));
    }

    #[test]
    fn rdp_impulse_encoding() {
        let params = rdp533();
        let c = encode_rdp(&params, &impulse(&params, 0, 0), &mut XorTally::new()).unwrap();
        assert_eq!(c.column(3), &col(5, &[0]));
        assert_eq!(c.column(4), &col(5, &[0, 3]));
        assert_eq!(c.column(5), &col(5, &[0, 1]));
        let a = augment_rdp(&c, &mut XorTally::new()).unwrap();
        assert!(!a.bit(4, 4) && !a.bit(4, 5));
    }

    #[test]
    fn encoding_costs() {
        let (p, k, r) = (7u64, 5u64, 3);
        let mut t = XorTally::new();
        let params = CodeParams::evenodd(7, 5, r).unwrap();
        encode_evenodd(&params, &vec![RingPoly::zero(7); 5], &mut t).unwrap();
        assert_eq!(t.count(), (k - 1) * (p - 1) + 2 * (k * p - k - 1));
        let params = CodeParams::rdp(7, 5, r).unwrap();
        let mut t = XorTally::new();
        encode_rdp(&params, &vec![RingPoly::zero(7); 5], &mut t).unwrap();
        assert_eq!(t.count(), (k - 1) * (p - 1) + 2 * k * (p - 2));
    }

    #[test]
    fn evenodd_augmentation() {
        let params = eo533();
        let c = encode_evenodd(&params, &impulse(&params, 3, 1), &mut XorTally::new()).unwrap();
        let mut t = XorTally::new();
        let a = augment_evenodd(&c, &mut t).unwrap();
        assert_eq!(t.count(), 3 + 2 * 2 * 4);
        assert_eq!(a.column(4), &col(5, &[4]));
        assert_eq!(deaugment(&a, &mut XorTally::new()).unwrap(), c);
    }

    #[test]
    fn subset_augmentation_leaves_other_columns() {
        let params = eo533();
        let c = encode_evenodd(&params, &impulse(&params, 3, 1), &mut XorTally::new()).unwrap();
        let mut t = XorTally::new();
        let a = augment_evenodd_subset(&c, &[2], &mut t).unwrap();
        assert_eq!(t.count(), 3 + 8);
        assert_eq!(a.column(4), c.column(4));
    }

    #[test]
    fn algebraic_matches_bitwise_on_impulses() {
        for params in [eo533(), rdp533()] {
            for (i, j) in [(3, 1), (0, 0), (2, 2)] {
                let info = impulse(&params, i, j);
                let mut t = XorTally::new();
                let expect = augment(&encode_any(&params, &info, &mut t).unwrap(), &mut t).unwrap();
                assert_eq!(algebraic_encode(&params, &info).unwrap(), expect);
            }
        }
    }

    #[test]
    fn shortening_examples() {
        let eo = CodeParams::new(Family::Evenodd, 5, 4, 3, Some(vec![0, 1, 4, 3]), false).unwrap();
        let rdp = rdp533();
        let zero = vec![RingPoly::zero(5); 3];
        assert!(shorten_check(&eo, &rdp, &zero).unwrap());
        let info = vec![col(5, &[0, 2]), col(5, &[1]), col(5, &[3])];
        assert!(shorten_check(&eo, &rdp, &info).unwrap());
        let mut aug = augment_rdp(&encode_rdp(&rdp, &info, &mut XorTally::new()).unwrap(), &mut XorTally::new()).unwrap();
        aug.flip(2, 4);
        assert!(!shorten_matches(&eo, &aug).unwrap());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn mds_examples() {
        assert!(mds_check(&CodeParams::evenodd(5, 5, 2).unwrap(), None, 1).unwrap().mds);
        let eo = CodeParams::new(Family::Evenodd, 5, 3, 3, Some(vec![0, 1, 2]), true).unwrap();
        assert!(mds_check(&eo, None, 1).unwrap().mds);
        let bad = CodeParams::new(Family::Evenodd, 9, 5, 2, None, false).unwrap();
        let report = mds_check(&bad, None, 1).unwrap();
        assert!(!report.mds);
        assert_eq!(report.witness, Some(vec![0, 3]));
    }
}
