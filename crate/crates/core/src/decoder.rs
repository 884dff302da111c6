//! Erasure recovery for EVENODD and RDP stripes.
//!
//! When some run of `gamma` consecutive parity columns survives right after
//! an erased parity column (or right after the information columns), the
//! erased information columns are the solution of a `gamma x gamma`
//! Vandermonde system over `R_p`, solved by [`solve_lu`]. Every other
//! pattern goes through a Cramer solve over `F2[x]/M_p(x)`.

use crate::codes::{
    augment_evenodd_column, augment_rdp_column, evenodd_row_parity_sum, parity_column, residue_coefficient,
    residue_system, CodeParams, CodewordArray, Family,
};
use crate::costmodel::CostBreakdown;
use crate::error::{Error, ParamError, Result};
use crate::ring::{QuotientPoly, RingPoly, XorTally};
use crate::vandermonde::{determinant, solve_lu, CramerSystem, ExponentTuple};

/// Erased information columns `e_1 < ... < e_gamma` and erased parity
/// columns `f_1 < ... < f_delta` (absolute indices `k..k+r`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ErasureSpec {
    info: Vec<usize>,
    parity: Vec<usize>,
}

impl ErasureSpec {
    /// Splits a set of erased column indices. Fails on duplicates or
    /// out-of-range columns; more than `r` erasures is reported as
    /// unrecoverable.
    pub fn new(params: &CodeParams, erased: &[usize]) -> Result<Self> {
        let mut cols = erased.to_vec();
        cols.sort_unstable();
        if cols.windows(2).any(|w| w[0] == w[1]) {
            return Err(ParamError::Dimension(format!("repeated column in erasure set {erased:?}")).into());
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= params.n()) {
            return Err(ParamError::Dimension(format!("column {c} is not below k+r={}", params.n())).into());
        }
        if cols.len() > params.r() {
            return Err(Error::Unrecoverable(format!("{} erased columns but only r={} parity columns", cols.len(), params.r())));
        }
        let (info, parity) = cols.iter().partition(|&&c| c < params.k());
        Ok(Self { info, parity })
    }

    /// The erasure set of a damaged stripe: the positions holding `None`.
    pub fn from_damaged(params: &CodeParams, damaged: &[Option<RingPoly>]) -> Result<Self> {
        if damaged.len() != params.n() {
            return Err(ParamError::Dimension(format!("expected {} columns, got {}", params.n(), damaged.len())).into());
        }
        let erased: Vec<usize> = (0..damaged.len()).filter(|&j| damaged[j].is_none()).collect();
        Self::new(params, &erased)
    }

    pub fn info(&self) -> &[usize] {
        &self.info
    }

    pub fn parity(&self) -> &[usize] {
        &self.parity
    }

    pub fn gamma(&self) -> usize {
        self.info.len()
    }

    pub fn delta(&self) -> usize {
        self.parity.len()
    }

    pub fn erased(&self) -> Vec<usize> {
        self.info.iter().chain(&self.parity).copied().collect()
    }
}

/// How a stripe with a given erasure pattern will be decoded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecodePlan {
    pub erasures: ErasureSpec,
    /// Index into the erased parity columns after which the window starts.
    pub lambda: Option<usize>,
    /// The `gamma` consecutive surviving parity columns used as equations.
    pub window: Vec<usize>,
    /// Surviving information columns.
    pub survivors: Vec<usize>,
    pub needs_fallback: bool,
}

impl DecodePlan {
    pub fn lambda_is_zero(&self) -> bool {
        self.lambda == Some(0)
    }
}

/// Erased parity columns framed by `k - 1` below and `k + r` above.
fn framed_parity(params: &CodeParams, erasures: &ErasureSpec) -> Vec<usize> {
    let mut f = vec![params.k() - 1];
    f.extend(&erasures.parity);
    f.push(params.k() + params.r());
    f
}

fn window_fits(f: &[usize], lambda: usize, gamma: usize) -> bool {
    f[lambda + 1] - f[lambda] > gamma
}

fn lu_applicable(params: &CodeParams, erasures: &ErasureSpec) -> bool {
    if erasures.parity.first() == Some(&params.k()) {
        return false;
    }
    let exps: Vec<i64> = erasures.info.iter().map(|&e| params.g()[e] as i64).collect();
    exps.is_empty() || ExponentTuple::new(params.p(), &exps).is_ok()
}

fn build_plan(params: &CodeParams, erasures: &ErasureSpec, lambda: Option<usize>) -> DecodePlan {
    let survivors = (0..params.k()).filter(|j| !erasures.info.contains(j)).collect();
    let f = framed_parity(params, erasures);
    let gamma = erasures.gamma();
    match lambda {
        Some(l) => DecodePlan {
            erasures: erasures.clone(),
            lambda: Some(l),
            window: (f[l] + 1..=f[l] + gamma).collect(),
            survivors,
            needs_fallback: false,
        },
        None => DecodePlan { erasures: erasures.clone(), lambda: None, window: Vec::new(), survivors, needs_fallback: true },
    }
}

/// Chooses the smallest admissible `lambda`, or marks the pattern for the
/// generic decoder when column `k` is erased, no window exists or the
/// erased exponents do not form an invertible Vandermonde system.
pub fn plan(params: &CodeParams, erasures: &ErasureSpec) -> Result<DecodePlan> {
    check_budget(params, erasures)?;
    let f = framed_parity(params, erasures);
    let lambda = lu_applicable(params, erasures)
        .then(|| (0..=erasures.delta()).find(|&l| window_fits(&f, l, erasures.gamma())))
        .flatten();
    Ok(build_plan(params, erasures, lambda))
}

/// Plans with a caller-chosen `lambda`, failing if its window is not
/// admissible.
pub fn plan_with_lambda(params: &CodeParams, erasures: &ErasureSpec, lambda: usize) -> Result<DecodePlan> {
    check_budget(params, erasures)?;
    let f = framed_parity(params, erasures);
    if lambda > erasures.delta() || !lu_applicable(params, erasures) || !window_fits(&f, lambda, erasures.gamma()) {
        return Err(ParamError::Dimension(format!("lambda={lambda} has no admissible window for {erasures:?}")).into());
    }
    Ok(build_plan(params, erasures, Some(lambda)))
}

/// Every admissible `lambda` for the pattern, in increasing order.
pub fn admissible_lambdas(params: &CodeParams, erasures: &ErasureSpec) -> Vec<usize> {
    if !lu_applicable(params, erasures) {
        return Vec::new();
    }
    let f = framed_parity(params, erasures);
    (0..=erasures.delta()).filter(|&l| window_fits(&f, l, erasures.gamma())).collect()
}

fn check_budget(params: &CodeParams, erasures: &ErasureSpec) -> Result<()> {
    let lost = erasures.gamma() + erasures.delta();
    if lost > params.r() {
        return Err(Error::Unrecoverable(format!("{lost} erased columns exceed r={}", params.r())));
    }
    Ok(())
}

fn window_offsets(params: &CodeParams, plan: &DecodePlan) -> Vec<usize> {
    plan.window.iter().map(|&w| w - params.k()).collect()
}

/// Subtracts the surviving information columns (and, for RDP, the
/// row-parity column) from the augmented window columns. Each addition
/// skips the one row known to be zero, costing `p - 1`.
fn syndromes(
    params: &CodeParams,
    plan: &DecodePlan,
    window: &[RingPoly],
    survivors: &[RingPoly],
    row_parity: Option<&RingPoly>,
    tally: &mut XorTally,
) -> Result<Vec<RingPoly>> {
    let p = params.p();
    if window.len() != plan.window.len() || survivors.len() != plan.survivors.len() {
        return Err(ParamError::Dimension("syndrome inputs do not match the plan".into()).into());
    }
    let mut out = Vec::with_capacity(window.len());
    for (col, l) in window.iter().zip(window_offsets(params, plan)) {
        let mut s = col.clone();
        let mut add = |c: &RingPoly, j: usize, tally: &mut XorTally| {
            let shift = params.shift_of(j, l);
            s.add_assign_known_zero(&c.shift(shift as i64), (p - 1 + shift) % p, tally);
        };
        for (c, &j) in survivors.iter().zip(&plan.survivors) {
            add(c, j, tally);
        }
        if let Some(rp) = row_parity.filter(|_| l >= 1) {
            add(rp, params.k(), tally);
        }
        out.push(s);
    }
    Ok(out)
}

/// EVENODD syndromes from the augmented window columns.
pub fn syndromes_evenodd(
    params: &CodeParams,
    plan: &DecodePlan,
    window: &[RingPoly],
    survivors: &[RingPoly],
    tally: &mut XorTally,
) -> Result<Vec<RingPoly>> {
    syndromes(params, plan, window, survivors, None, tally)
}

/// RDP syndromes; windows past column `k` also remove the shifted
/// row-parity column.
pub fn syndromes_rdp(
    params: &CodeParams,
    plan: &DecodePlan,
    window: &[RingPoly],
    survivors: &[RingPoly],
    row_parity: &RingPoly,
    tally: &mut XorTally,
) -> Result<Vec<RingPoly>> {
    syndromes(params, plan, window, survivors, Some(row_parity), tally)
}

enum Route {
    Reencode,
    Lu { plan: DecodePlan, exps: Option<ExponentTuple> },
    Fallback(Box<FallbackSolver>),
}

/// Residue equations chosen for a pattern outside the LU path.
struct FallbackSolver {
    offsets: Vec<usize>,
    system: CramerSystem,
    // coefficients of the surviving information columns, per chosen offset
    known: Vec<Vec<QuotientPoly>>,
}

/// A decoder prepared for one code and one erasure pattern; reusable across
/// stripes.
pub struct Decoder {
    params: CodeParams,
    erasures: ErasureSpec,
    route: Route,
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

impl FallbackSolver {
    fn new(params: &CodeParams, erasures: &ErasureSpec) -> Result<Self> {
        let gamma = erasures.gamma();
        let alive: Vec<usize> =
            (0..params.r()).filter(|l| !erasures.parity.contains(&(params.k() + l))).collect();
        let survivors: Vec<usize> = (0..params.k()).filter(|j| !erasures.info.contains(j)).collect();
        let mut pick: Vec<usize> = (0..gamma).collect();
        loop {
            let offsets: Vec<usize> = pick.iter().map(|&i| alive[i]).collect();
            let m = residue_system(params, &erasures.info, &offsets);
            if determinant(&m).inverse().is_some() {
                let system = CramerSystem::new(&m)?;
                let known = offsets
                    .iter()
                    .map(|&l| survivors.iter().map(|&j| residue_coefficient(params, j, l)).collect())
                    .collect();
                return Ok(Self { offsets, system, known });
            }
            if !next_combination(&mut pick, alive.len()) {
                return Err(Error::Unrecoverable(format!(
                    "no invertible set of {gamma} surviving parity columns for erased columns {:?}",
                    erasures.erased()
                )));
            }
        }
    }
}

impl Decoder {
    pub fn new(params: &CodeParams, erasures: &ErasureSpec) -> Result<Self> {
        let plan = plan(params, erasures)?;
        Self::with_plan(params, plan)
    }

    pub fn with_plan(params: &CodeParams, plan: DecodePlan) -> Result<Self> {
        let erasures = plan.erasures.clone();
        let route = if erasures.gamma() == 0 {
            Route::Reencode
        } else if plan.needs_fallback {
            Route::Fallback(Box::new(FallbackSolver::new(params, &erasures)?))
        } else {
            let exps: Vec<i64> = erasures.info.iter().map(|&e| params.g()[e] as i64).collect();
            let exps = (exps.len() > 1).then(|| ExponentTuple::new(params.p(), &exps)).transpose()?;
            Route::Lu { plan, exps }
        };
        Ok(Self { params: params.clone(), erasures, route })
    }

    /// A decoder that always takes the generic residue route.
    pub fn fallback(params: &CodeParams, erasures: &ErasureSpec) -> Result<Self> {
        check_budget(params, erasures)?;
        let route = if erasures.gamma() == 0 {
            Route::Reencode
        } else {
            Route::Fallback(Box::new(FallbackSolver::new(params, erasures)?))
        };
        Ok(Self { params: params.clone(), erasures: erasures.clone(), route })
    }

    pub fn uses_lu(&self) -> bool {
        matches!(self.route, Route::Lu { .. })
    }

    pub fn erasures(&self) -> &ErasureSpec {
        &self.erasures
    }

    fn check_damaged(&self, damaged: &[Option<RingPoly>]) -> Result<()> {
        let params = &self.params;
        if damaged.len() != params.n() {
            return Err(ParamError::Dimension(format!("expected {} columns, got {}", params.n(), damaged.len())).into());
        }
        for (j, c) in damaged.iter().enumerate() {
            let erased = self.erasures.info.contains(&j) || self.erasures.parity.contains(&j);
            match c {
                None if !erased => return Err(Error::Input(format!("column {j} is missing but not declared erased"))),
                Some(c) if c.p() != params.p() => {
                    return Err(ParamError::ModulusMismatch { left: params.p(), right: c.p() }.into())
                }
                Some(c) if c.top() => return Err(Error::Input(format!("stored column {j} has a bit in row p-1"))),
                _ => {}
            }
        }
        Ok(())
    }

    /// Recovers the full stripe, reporting the XORs spent per stage.
    pub fn decode(&self, damaged: &[Option<RingPoly>]) -> Result<(CodewordArray, CostBreakdown)> {
        self.check_damaged(damaged)?;
        let params = &self.params;
        let mut cols: Vec<RingPoly> =
            damaged.iter().map(|c| c.clone().unwrap_or_else(|| RingPoly::zero(params.p()))).collect();
        let (mut aug, mut syn, mut solve, mut red) = (XorTally::new(), XorTally::new(), XorTally::new(), XorTally::new());
        match &self.route {
            Route::Reencode => {}
            Route::Lu { plan, exps } => {
                let recovered = self.decode_lu(plan, exps.as_ref(), damaged, [&mut aug, &mut syn, &mut solve, &mut red])?;
                for (&e, c) in self.erasures.info.iter().zip(recovered) {
                    cols[e] = c;
                }
            }
            Route::Fallback(solver) => {
                for (&e, c) in self.erasures.info.iter().zip(self.decode_residues(solver, damaged)) {
                    cols[e] = c;
                }
            }
        }
        let mut re = XorTally::new();
        let k = params.k();
        let info = cols[..k].to_vec();
        // parity indices are sorted, so column k is already rebuilt when later ones need it
        for &f in &self.erasures.parity {
            let row_parity = (f > k).then(|| cols[k].clone());
            cols[f] = parity_column(params, &info, row_parity.as_ref(), f - k, &mut re);
        }
        let cost = CostBreakdown::new(aug.count(), syn.count(), solve.count(), red.count(), re.count());
        Ok((CodewordArray::from_columns(params, cols)?, cost))
    }

    fn decode_lu(
        &self,
        plan: &DecodePlan,
        exps: Option<&ExponentTuple>,
        damaged: &[Option<RingPoly>],
        [aug, syn, solve, red]: [&mut XorTally; 4],
    ) -> Result<Vec<RingPoly>> {
        let params = &self.params;
        let k = params.k();
        let col = |j: usize| damaged[j].as_ref().expect("planned column survives");
        let offsets = window_offsets(params, plan);
        let survivors: Vec<RingPoly> = plan.survivors.iter().map(|&j| col(j).clone()).collect();
        let v = match params.family() {
            Family::Evenodd => {
                let s = evenodd_row_parity_sum(params, col(k), aug);
                let window: Vec<RingPoly> = plan
                    .window
                    .iter()
                    .zip(&offsets)
                    .map(|(&w, &l)| if l == 0 { col(w).clone() } else { augment_evenodd_column(params, col(w), s, aug) })
                    .collect();
                syndromes_evenodd(params, plan, &window, &survivors, syn)?
            }
            Family::Rdp => {
                let window: Vec<RingPoly> = plan
                    .window
                    .iter()
                    .zip(&offsets)
                    .map(|(&w, &l)| if l == 0 { col(w).clone() } else { augment_rdp_column(params, col(w), aug) })
                    .collect();
                syndromes_rdp(params, plan, &window, &survivors, col(k), syn)?
            }
        };
        let u = match exps {
            Some(e) => solve_lu(e, &v, solve)?,
            None => v,
        };
        let first = offsets[0];
        Ok(u
            .into_iter()
            .zip(&self.erasures.info)
            .map(|(ui, &e)| ui.shift(-((params.shift_of(e, first)) as i64)).reduce_mod_mp(red))
            .collect())
    }

    fn decode_residues(&self, solver: &FallbackSolver, damaged: &[Option<RingPoly>]) -> Vec<RingPoly> {
        let params = &self.params;
        let (p, k) = (params.p(), params.k());
        let mut scratch = XorTally::new();
        let survivors: Vec<QuotientPoly> = (0..k)
            .filter(|j| !self.erasures.info.contains(j))
            .map(|j| QuotientPoly::reduce(damaged[j].as_ref().expect("survivor")))
            .collect();
        let v: Vec<QuotientPoly> = solver
            .offsets
            .iter()
            .zip(&solver.known)
            .map(|(&l, coefs)| {
                let stored = damaged[k + l].as_ref().expect("chosen parity survives");
                let residue = match (params.family(), l) {
                    (Family::Rdp, 1..) => QuotientPoly::reduce(&augment_rdp_column(params, stored, &mut scratch)),
                    _ => QuotientPoly::reduce(stored),
                };
                survivors.iter().zip(coefs).fold(residue, |acc, (a, c)| acc.add(&a.mul(c)))
            })
            .collect();
        debug_assert!(v.iter().all(|x| x.p() == p));
        solver.system.solve(&v).into_iter().map(QuotientPoly::into_ring).collect()
    }
}

/// Recovers an EVENODD stripe, taking the LU path when the plan allows it.
pub fn decode_evenodd(params: &CodeParams, damaged: &[Option<RingPoly>], tally: &mut XorTally) -> Result<CodewordArray> {
    require(params, Family::Evenodd)?;
    decode(params, damaged, tally)
}

/// Recovers an RDP stripe, taking the LU path when the plan allows it.
pub fn decode_rdp(params: &CodeParams, damaged: &[Option<RingPoly>], tally: &mut XorTally) -> Result<CodewordArray> {
    require(params, Family::Rdp)?;
    decode(params, damaged, tally)
}

fn require(params: &CodeParams, family: Family) -> Result<()> {
    if params.family() != family {
        return Err(ParamError::Dimension(format!("{params} is not an {family} code")).into());
    }
    Ok(())
}

/// Decodes either family with the automatically chosen plan.
pub fn decode(params: &CodeParams, damaged: &[Option<RingPoly>], tally: &mut XorTally) -> Result<CodewordArray> {
    let erasures = ErasureSpec::from_damaged(params, damaged)?;
    let (out, cost) = Decoder::new(params, &erasures)?.decode(damaged)?;
    tally.charge(cost.total);
    Ok(out)
}

/// Recovers any pattern the code can correct by solving residues modulo
/// `M_p(x)` with Cramer's rule. Not tallied.
pub fn decode_fallback(params: &CodeParams, damaged: &[Option<RingPoly>]) -> Result<CodewordArray> {
    let erasures = ErasureSpec::from_damaged(params, damaged)?;
    Ok(Decoder::fallback(params, &erasures)?.decode(damaged)?.0)
}
