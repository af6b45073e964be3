//! End-to-end runners for the reduction propositions: the gcd small-value
//! bound, the primary-polynomial extraction, its refinement over
//! multiplicatively independent scale sets, and the multiples-of-xi
//! variant. Every hypothesis and every produced bound is certified and
//! recorded in an ordered trace.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GlError;
use crate::factorgcd::{self, ScaleSet};
use crate::interval::{ComplexEnclosure, RealInterval};
use crate::poly::{rat, EvalPointSet, RatPoly};
use crate::transforms::AffineMap;
use crate::verdict::{digest_inputs, Outcome, Verdict};

/// Shared parameter bundle for the runners (file-format side).
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub ell: Option<usize>,
    pub x: BigRational,
    pub kappa: BigRational,
    pub epsilon: Option<BigRational>,
}

/// One certified step of a pipeline run.
#[derive(Clone, Debug)]
pub struct StageRecord {
    pub stage: String,
    pub digest: String,
    pub verdict: Verdict,
}

/// Ordered, append-only record of a run.
#[derive(Clone, Debug, Default)]
pub struct PipelineTrace {
    pub stages: Vec<StageRecord>,
}

impl PipelineTrace {
    pub fn push(&mut self, stage: impl Into<String>, object: &str, verdict: Verdict) {
        self.stages.push(StageRecord {
            stage: stage.into(),
            digest: digest_inputs(&[object]),
            verdict,
        });
    }

    pub fn holds(&self) -> bool {
        self.stages.iter().all(|s| s.verdict.outcome == Outcome::Holds)
    }

    pub fn first_failure(&self) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.verdict.outcome != Outcome::Holds)
    }
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// prod over E of (|Q(xi)| / cont Q)^t.
fn content_value_product(q: &RatPoly, e: &EvalPointSet, t: usize, bits: u32) -> RealInterval {
    let cont = q.content().expect("nonzero");
    let mut acc = RealInterval::one();
    for z in &e.points {
        let r = q
            .eval_enclosure(z, bits)
            .abs(bits)
            .div(&RealInterval::point(cont.clone()))
            .expect("content > 0");
        acc = &acc * &r.powi(t as u32);
    }
    acc
}

/// delta_P = max |P^{[j]}(lambda . xi)| over maps, xi in E, j < 2t.
fn delta_p(p: &RatPoly, maps: &[AffineMap], e: &EvalPointSet, t: usize, bits: u32) -> RealInterval {
    let mut acc = RealInterval::zero();
    for j in 0..2 * t {
        let d = p.divided_derivative(j);
        for m in maps {
            for z in &e.points {
                let pt = m.apply_enclosure(z);
                acc = acc.max(&d.eval_enclosure(&pt, bits).abs(bits));
            }
        }
    }
    acc
}

/// The gcd of the images lambda(P^{[i]}) over maps and i < t, primitive
/// with positive leading coefficient.
fn derivative_translate_gcd(
    p: &RatPoly,
    maps: &[AffineMap],
    t: usize,
) -> Result<RatPoly, GlError> {
    let mut acc: Option<RatPoly> = None;
    for m in maps {
        for i in 0..t {
            let img = m.apply(&p.divided_derivative(i));
            if img.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => img.primitive_part()?,
                Some(g) => factorgcd::gcd_q(&g, &img)?,
            });
        }
    }
    acc.ok_or(GlError::ZeroPolynomial)
}

/// gcd bound runner: Q = gcd of lambda(P^{[i]}), delta_P, and the verdict
/// on prod (|Q(xi)|/cont Q)^t <=
/// (e^4 c_A (2+c_E))^{4n^2} Delta_E^{-t^2} H(P)^{2n} delta_P^{|E|t}.
pub fn run_prop_q(
    p: &RatPoly,
    maps: &[AffineMap],
    e: &EvalPointSet,
    t: usize,
    n: usize,
) -> Result<(RatPoly, RealInterval, Verdict), GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if !p.has_integer_coeffs() {
        return Err(GlError::precondition("P must have integer coefficients"));
    }
    if maps.is_empty() || t == 0 {
        return Err(GlError::precondition("need nonempty maps and t >= 1"));
    }
    if e.len() * t > n || p.deg() > n {
        return Err(GlError::precondition("need |E| t <= n and deg P <= n"));
    }
    if e.metrics(64).delta_product.contains(&BigRational::zero()) {
        return Err(GlError::precondition("Delta_E enclosure contains zero"));
    }
    let q = derivative_translate_gcd(p, maps, t)?;
    let c_maps = maps.iter().map(|m| m.height()).max().unwrap();
    let hp = p.height()?;
    let st = e.len() * t;
    let verdict = Verdict::decide_default("propQ_gcd_bound", |bits| {
        let m = e.metrics(bits);
        let lhs = content_value_product(&q, e, t, bits);
        let base = &(&RealInterval::from_int(4).exp(bits) * &RealInterval::point(c_maps.clone()))
            * &(&RealInterval::from_int(2) + &m.max_modulus);
        let rhs = &(&(&base.round_out(bits + 16).powi((4 * n * n) as u32).round_out(bits + 16)
            * &m.delta_product.powi((t * t) as u32).recip().expect("Delta_E > 0"))
            * &RealInterval::point(pow_rat(&hp, 2 * n as u32)))
            * &delta_p(p, maps, e, t, bits).powi(st as u32);
        (lhs.round_out(bits + 32), rhs.round_out(bits + 32))
    });
    Ok((q, delta_p(p, maps, e, t, 128), verdict))
}

/// Largest power S = R^k with deg S <= deg_cap and H(S) <= X^{exp}
/// (height comparison certified by intervals).
fn power_up(
    r: &RatPoly,
    deg_cap: usize,
    x: &BigRational,
    height_exp: &BigRational,
) -> Result<RatPoly, GlError> {
    if r.is_constant() {
        return Err(GlError::precondition("cannot power up a constant"));
    }
    let fits = |cand: &RatPoly| -> Result<bool, GlError> {
        if cand.deg() > deg_cap {
            return Ok(false);
        }
        let h = cand.height()?;
        let v = Verdict::decide_default("power_height_cap", |bits| {
            (
                RealInterval::point(h.clone()),
                RealInterval::point(x.clone())
                    .pow_rational(height_exp, bits)
                    .expect("X > 0"),
            )
        });
        Ok(v.holds())
    };
    if !fits(r)? {
        return Err(GlError::precondition("R itself violates the power-up caps"));
    }
    let mut s = r.clone();
    loop {
        let next = s.mul(r);
        if !fits(&next)? {
            break;
        }
        s = next;
    }
    Ok(s)
}

/// Certify x_expr <= X^{epsilon_exp} style hypothesis: lhs interval
/// against a rational power of X.
fn x_power(x: &BigRational, exp: &BigRational, bits: u32) -> RealInterval {
    RealInterval::point(x.clone())
        .pow_rational(exp, bits)
        .expect("X > 0")
}

fn require_holds(trace: &PipelineTrace) -> Result<(), GlError> {
    if let Some(stage) = trace.first_failure() {
        if stage.verdict.outcome == Outcome::Undecided {
            return Err(GlError::Undecided(stage.verdict.precision_bits));
        }
    }
    Ok(())
}

/// Primary-polynomial extraction: from a small-valued P over maps and E,
/// produce a primary S and a point xi with deg S <= 5n/(st),
/// H(S) <= X^{10/(st)} and |S(xi)|/cont(S) <= X^{-kappa' n/(st)^2},
/// kappa' = (kappa - 27)/16.
pub fn run_prop_r(
    p: &RatPoly,
    maps: &[AffineMap],
    e: &EvalPointSet,
    s: usize,
    t: usize,
    n: usize,
    x: &BigRational,
    kappa: &BigRational,
) -> Result<(RatPoly, ComplexEnclosure, PipelineTrace), GlError> {
    // hypothesis block: nothing is constructed before these pass
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if !p.has_integer_coeffs() {
        return Err(GlError::precondition("P must have integer coefficients"));
    }
    if s == 0 || t == 0 || s * t > n {
        return Err(GlError::precondition("need s, t >= 1 and st <= n"));
    }
    if maps.len() < s || e.len() < s {
        return Err(GlError::precondition("need min(|maps|, |E|) >= s"));
    }
    if *kappa <= rat(27) {
        return Err(GlError::HypothesisRejected("kappa must exceed 27".into()));
    }
    if p.deg() > n || p.height()? > *x {
        return Err(GlError::HypothesisRejected("P violates the degree or height cap".into()));
    }
    let kappa_p = (kappa - rat(27)) / rat(16);
    let c_maps = maps.iter().map(|m| m.height()).max().unwrap();
    let st = rat((s * t) as i64);
    // X lower bounds (propR:eqprop1)
    let x_iv = RealInterval::point(x.clone());
    let hyp1 = Verdict::decide_default("propR_X_lower_bounds", |bits| {
        let m = e.metrics(bits);
        let three_n = RealInterval::point(pow_rat(&rat(3), n as u32));
        let ca_n = RealInterval::point(pow_rat(&c_maps, n as u32));
        let ce_n = (&RealInterval::from_int(2) + &m.max_modulus).powi(n as u32);
        let de = m
            .delta
            .pow_rational(&(-rat((s * s * t * t) as i64) / rat(n as i64)), bits)
            .unwrap_or_else(|_| RealInterval::point(x.clone()) );
        let lhs = three_n.max(&ca_n).max(&ce_n).max(&de);
        (lhs, x_iv.clone())
    });
    if !hyp1.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "X lower bounds are {}",
            hyp1.outcome
        )));
    }
    // small-value hypothesis (propR:eqprop2)
    let sv_exp = -(kappa * rat(n as i64)) / &st;
    let hyp2 = Verdict::decide_default("propR_small_value", |bits| {
        (delta_p(p, maps, e, t, bits), x_power(x, &sv_exp, bits))
    });
    if !hyp2.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "small-value hypothesis is {}",
            hyp2.outcome
        )));
    }
    let mut trace = PipelineTrace::default();
    trace.push("hypothesis:X_bounds", &x.to_string(), hyp1);
    trace.push("hypothesis:small_value", &p.to_text(), hyp2);
    // restrict to the first s points (free choice recorded by order)
    let e_s = EvalPointSet::new(e.points[..s].to_vec())?;
    // stage 1: gcd bound
    let (q, _delta, vq) = run_prop_q(p, maps, &e_s, t, n)?;
    trace.push("propQ:gcd_bound", &q.to_text(), vq);
    // stage 2: linearization a) with rho = 4, c = 8 kappa'
    let c_lin = rat(8) * &kappa_p;
    let rho = rat(4);
    let (r, v_lin) = factorgcd::linearize_a(&q, n, x, &c_lin, &rho, &e_s)?;
    trace.push("linearize:first_factor", &r.to_text(), v_lin);
    // stage 3: select xi in E with |R(xi)|/cont(R) <= (X^{deg R} H(R)^n)^{-kappa'/(st)}
    let base = pow_rat(x, r.deg() as u32) * pow_rat(&r.height()?, n as u32);
    let sel_exp = -(&kappa_p / &st);
    let cont_r = r.content()?;
    let mut chosen: Option<(ComplexEnclosure, Verdict)> = None;
    for z in &e_s.points {
        let v = Verdict::decide_default("propR_point_selection", |bits| {
            let lhs = r
                .eval_enclosure(z, bits)
                .abs(bits)
                .div(&RealInterval::point(cont_r.clone()))
                .expect("content > 0");
            let rhs = RealInterval::point(base.clone())
                .pow_rational(&sel_exp, bits)
                .expect("positive base");
            (lhs, rhs)
        });
        if v.holds() {
            chosen = Some((z.clone(), v));
            break;
        }
    }
    let Some((xi, v_sel)) = chosen else {
        return Err(GlError::NotFound("no point of E achieves the selection bound".into()));
    };
    trace.push("select:point", &format!("{xi:?}"), v_sel);
    // stage 4: degree/height control on R
    let v_h3 = factorgcd::check_lemma_h3(p, maps, &r, s, t, n)?;
    trace.push("lemmaH3:deg_height", &r.to_text(), v_h3);
    // stage 5: power up with rho = 5/(st), final caps deg <= 5n/(st),
    // H <= X^{10/(st)}
    let deg_cap = 5 * n / (s * t);
    let h_exp = rat(10) / &st;
    let s_poly = power_up(&r, deg_cap, x, &h_exp)?.primitive_part()?;
    let final_exp = -(&kappa_p * rat(n as i64)) / (&st * &st);
    let cont_s = s_poly.content()?;
    let v_final = Verdict::decide_default("propR_final_bound", |bits| {
        let lhs = s_poly
            .eval_enclosure(&xi, bits)
            .abs(bits)
            .div(&RealInterval::point(cont_s.clone()))
            .expect("content > 0");
        (lhs, x_power(x, &final_exp, bits))
    });
    let v_deg = Verdict::exact(
        "propR_final_degree",
        rat((s_poly.deg() * s * t) as i64),
        rat(5 * n as i64),
    );
    let hs = s_poly.height()?;
    let v_height = Verdict::decide_default("propR_final_height", |bits| {
        (RealInterval::point(hs.clone()), x_power(x, &h_exp, bits))
    });
    trace.push(
        "final:primary",
        &s_poly.to_text(),
        Verdict::all("propR_final", &[v_deg, v_height, v_final]),
    );
    require_holds(&trace)?;
    Ok((s_poly, xi, trace))
}

/// The scale-set refinement: from a small-valued P over a multiplicatively
/// independent A and E in C^*, produce a primary integer S with
/// deg S <= 2n/(st), H(S) <= X^{4/(st)} and
/// prod |S(xi)| <= X^{-kappa' n / t^2},
/// kappa' = (kappa - 2 - 34 eps) / (64 (l+1)), eps = 1/(4l+10).
pub fn run_prop_rbis(
    p: &RatPoly,
    a: &ScaleSet,
    e: &EvalPointSet,
    t: usize,
    ell: usize,
    n: usize,
    x: &BigRational,
    kappa: &BigRational,
    epsilon: &BigRational,
) -> Result<(RatPoly, PipelineTrace), GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if !p.has_integer_coeffs() {
        return Err(GlError::precondition("P must have integer coefficients"));
    }
    if !a.is_independent() {
        return Err(GlError::precondition("A must be multiplicatively independent"));
    }
    let s = a.len();
    if s < (ell + 2).max(2 * ell) {
        return Err(GlError::precondition("need s >= max(l+2, 2l)"));
    }
    let eps_pinned = rat(1) / rat(4 * ell as i64 + 10);
    if *epsilon != eps_pinned {
        return Err(GlError::precondition("epsilon must equal 1/(4l+10)"));
    }
    if t == 0 || s.max(e.len()) * t > n {
        return Err(GlError::precondition("need max(s, |E|) t <= n"));
    }
    let n_cap = crate::combinatorics::partition_threshold(s, ell);
    if rat(n as i64) > n_cap {
        return Err(GlError::precondition("need n <= N(s, l)"));
    }
    if e.points.iter().any(|z| {
        z.as_exact_rational().map(|v| v.is_zero()).unwrap_or(false)
    }) {
        return Err(GlError::precondition("E must avoid 0"));
    }
    if *kappa <= rat(2) + rat(34) * epsilon {
        return Err(GlError::HypothesisRejected("kappa must exceed 2 + 34 eps".into()));
    }
    if p.deg() > n || p.height()? > *x {
        return Err(GlError::HypothesisRejected("P violates the degree or height cap".into()));
    }
    let kappa_p = (kappa - rat(2) - rat(34) * epsilon) / rat(64 * (ell as i64 + 1));
    let maps: Vec<AffineMap> = a
        .elements()
        .iter()
        .map(|v| AffineMap::scaling(v.clone()))
        .collect::<Result<_, _>>()?;
    let c_a = a.c_a();
    // c_E = max over E of max(|xi|, |xi|^{-1})
    let c_e_sym = |bits: u32| -> Result<RealInterval, GlError> {
        let mut acc = RealInterval::zero();
        for z in &e.points {
            let m = z.abs(bits);
            acc = acc.max(&m).max(&m.recip()?);
        }
        Ok(acc)
    };
    c_e_sym(64)?;
    // X^eps lower bounds (propRbis:eqprop1)
    let et = e.len() * t;
    let hyp1 = Verdict::decide_default("propRbis_X_lower_bounds", |bits| {
        let m = e.metrics(bits);
        let lhs = RealInterval::point(pow_rat(&rat(3), n as u32))
            .max(&RealInterval::point(pow_rat(&c_a, n as u32)))
            .max(&(&RealInterval::from_int(2) + &c_e_sym(bits).expect("E avoids 0")).powi(n as u32))
            .max(
                &m.delta
                    .pow_rational(&(-rat((et * et) as i64) / rat(n as i64)), bits)
                    .unwrap_or_else(|_| RealInterval::point(x.clone())),
            );
        (lhs, x_power(x, epsilon, bits))
    });
    if !hyp1.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "X^eps lower bounds are {}",
            hyp1.outcome
        )));
    }
    // small-value hypothesis (propRbis:eqprop2)
    let sv_exp = -(kappa * rat(n as i64)) / rat(et as i64);
    let hyp2 = Verdict::decide_default("propRbis_small_value", |bits| {
        (delta_p(p, &maps, e, t, bits), x_power(x, &sv_exp, bits))
    });
    if !hyp2.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "small-value hypothesis is {}",
            hyp2.outcome
        )));
    }
    let mut trace = PipelineTrace::default();
    trace.push("hypothesis:X_bounds", &x.to_string(), hyp1);
    trace.push("hypothesis:small_value", &p.to_text(), hyp2);
    // stage 1: strip the T-power (P = T^m Ptilde)
    let m_strip = p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let p_tilde = RatPoly::from_coeffs(p.coeffs()[m_strip..].to_vec());
    // re-derived small values (propRbis:eq1)
    let sv2_exp = -((kappa - rat(9) * epsilon) * rat(n as i64)) / rat(et as i64);
    let v_strip = Verdict::decide_default("propRbis_stripped_small_value", |bits| {
        (delta_p(&p_tilde, &maps, e, t, bits), x_power(x, &sv2_exp, bits))
    });
    trace.push("strip:T_power", &p_tilde.to_text(), v_strip);
    // stage 2: gcd of translates with the Theorem-G degree/height bounds
    let (v_deg_g, v_h_g) = factorgcd::verify_thm_g(&p_tilde, a, ell)?;
    let q_tilde = factorgcd::gcd_translates(&p_tilde, a)?;
    trace.push("gcd_translates:thmG", &q_tilde.to_text(), Verdict::all("thmG_bounds", &[v_deg_g, v_h_g]));
    // stage 3: gcd with derivative translates, Prop 5.1 bound and the
    // degree/height consequences deg Q <= 4(l+1)n/s,
    // log H(Q) <= 8(l+1) log X / s
    let (q, _delta, vq) = run_prop_q(&p_tilde, &maps, e, t, n)?;
    let v_deg_q = Verdict::exact(
        "propRbis_Q_degree",
        rat((q.deg() * s) as i64),
        rat(4 * (ell as i64 + 1) * n as i64),
    );
    let hq = q.height()?;
    let hq_exp = rat(8 * (ell as i64 + 1)) / rat(s as i64);
    let v_h_q = Verdict::decide_default("propRbis_Q_height", |bits| {
        (RealInterval::point(hq.clone()), x_power(x, &hq_exp, bits))
    });
    // product bound prod (|Q(xi)|/cont Q)^t <= X^{-64(l+1) kappa' n}
    let prod_exp = -rat(64 * (ell as i64 + 1)) * &kappa_p * rat(n as i64);
    let v_prod = Verdict::decide_default("propRbis_Q_product", |bits| {
        (content_value_product(&q, e, t, bits), x_power(x, &prod_exp, bits))
    });
    trace.push(
        "propQ:derivative_gcd",
        &q.to_text(),
        Verdict::all("propRbis_Q_bounds", &[vq, v_deg_q, v_h_q, v_prod]),
    );
    // stage 4: linearization a) with rho = 8(l+1)/s, c = 32(l+1) kappa'
    let rho = rat(8 * (ell as i64 + 1)) / rat(s as i64);
    let c_lin = rat(32 * (ell as i64 + 1)) * &kappa_p;
    let (r, v_lin) = factorgcd::linearize_a(&q, n, x, &c_lin, &rho, e)?;
    trace.push("linearize:first_factor", &r.to_text(), v_lin);
    // stage 5: degree/height control on R
    let v_h3 = factorgcd::check_lemma_h3(&p_tilde, &maps, &r, s, t, n)?;
    trace.push("lemmaH3:deg_height", &r.to_text(), v_h3);
    // stage 6: power up with rho = 2/(st): deg <= 2n/(st), H <= X^{4/(st)},
    // and the final product bound prod |S(xi)| <= X^{-kappa' n/t^2}
    let st = s * t;
    let deg_cap = 2 * n / st;
    let h_exp = rat(4) / rat(st as i64);
    let s_poly = power_up(&r, deg_cap, x, &h_exp)?.primitive_part()?;
    let final_exp = -(&kappa_p * rat(n as i64)) / rat((t * t) as i64);
    let v_final = Verdict::decide_default("propRbis_final_product", |bits| {
        let mut acc = RealInterval::one();
        for z in &e.points {
            acc = &acc * &s_poly.eval_enclosure(z, bits).abs(bits);
        }
        (acc.round_out(bits + 32), x_power(x, &final_exp, bits))
    });
    let v_deg = Verdict::exact(
        "propRbis_final_degree",
        rat((s_poly.deg() * st) as i64),
        rat(2 * n as i64),
    );
    let hs = s_poly.height()?;
    let v_height = Verdict::decide_default("propRbis_final_height", |bits| {
        (RealInterval::point(hs.clone()), x_power(x, &h_exp, bits))
    });
    trace.push(
        "final:primary",
        &s_poly.to_text(),
        Verdict::all("propRbis_final", &[v_deg, v_height, v_final]),
    );
    require_holds(&trace)?;
    Ok((s_poly, trace))
}

/// phi(a, xi) with X^{-phi n} = min(1, |Q(a xi)|) lower-bounded via
/// |Q(a xi)| / (X^eps ||Q(aT)||); None encodes an exact zero (phi
/// unbounded above).
fn phi_entry(
    q_translate: &RatPoly,
    z: &ComplexEnclosure,
    x: &BigRational,
    epsilon: &BigRational,
    n: usize,
    bits: u32,
) -> Result<Option<RealInterval>, GlError> {
    let v = q_translate.eval_enclosure(z, bits).abs(bits);
    if v.hi.is_zero() {
        return Ok(None);
    }
    if v.lo.is_zero() {
        return Err(GlError::Undecided(bits));
    }
    let norm = RealInterval::point(q_translate.norm()?);
    let lnx = RealInterval::point(x.clone()).ln(bits)?;
    let num = &(&RealInterval::point(epsilon.clone()) * &lnx) + &(&norm.ln(bits)? - &v.ln(bits)?);
    let phi = num.div(&(&lnx * &RealInterval::from_int(n as i64)))?;
    // clip at zero: phi is defined through min(1, .)
    let lo = if phi.lo.is_negative() { BigRational::zero() } else { phi.lo.clone() };
    let hi = if phi.hi.is_negative() { BigRational::zero() } else { phi.hi.clone() };
    Ok(Some(RealInterval::new(lo, hi)))
}

/// Multiples-of-xi runner: from a P whose product of values at the points
/// a xi is tiny, produce S = Q(aT) and xi with deg S <= n,
/// H(S) <= X^{2+2eps} and |S(xi)|/||S|| <= X^{-kappa n}.
pub fn run_prop_rter(
    p: &RatPoly,
    a: &ScaleSet,
    e: &EvalPointSet,
    n: usize,
    x: &BigRational,
    kappa: &BigRational,
    epsilon: &BigRational,
) -> Result<(RatPoly, ComplexEnclosure, PipelineTrace), GlError> {
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    if !p.has_integer_coeffs() {
        return Err(GlError::precondition("P must have integer coefficients"));
    }
    if a.len() < 2 {
        return Err(GlError::precondition("need |A| >= 2"));
    }
    let pairs = a.len() * (a.len() - 1) / 2;
    if e.len() < pairs || e.len() > n {
        return Err(GlError::precondition("need binom(|A|,2) <= |E| <= n"));
    }
    if !epsilon.is_positive() || *epsilon > rat(1) / rat(10) {
        return Err(GlError::precondition("need 0 < eps <= 1/10"));
    }
    if *kappa < rat(6) {
        return Err(GlError::HypothesisRejected("kappa must be at least 6".into()));
    }
    if p.deg() > n || p.height()? > *x {
        return Err(GlError::HypothesisRejected("P violates the degree or height cap".into()));
    }
    if e.points.iter().any(|z| {
        z.as_exact_rational().map(|v| v.is_zero()).unwrap_or(false)
    }) {
        return Err(GlError::precondition("E must avoid 0"));
    }
    let c_a = a.c_a();
    // all combination points a xi
    let mut combo = Vec::new();
    for s in a.elements() {
        for z in &e.points {
            combo.push(z.scale(s));
        }
    }
    let combo_set = EvalPointSet::new(combo)?;
    // X^eps lower bounds (propRter:eqprop2)
    let hyp1 = Verdict::decide_default("propRter_X_lower_bounds", |bits| {
        let m = e.metrics(bits);
        let mut ce = RealInterval::zero();
        for z in &e.points {
            let v = z.abs(bits);
            ce = ce.max(&v).max(&v.recip().expect("E avoids 0"));
        }
        let lhs = RealInterval::from_int(n as i64)
            .exp(bits)
            .max(&RealInterval::point(pow_rat(&c_a, n as u32)))
            .max(&(&RealInterval::from_int(2) + &ce).powi(n as u32))
            .max(
                &m.delta_product
                    .pow_rational(&(-rat(1) / rat(n as i64)), bits)
                    .unwrap_or_else(|_| RealInterval::point(x.clone())),
            );
        (lhs, x_power(x, epsilon, bits))
    });
    if !hyp1.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "X^eps lower bounds are {}",
            hyp1.outcome
        )));
    }
    // product hypothesis (propRter:eqprop3)
    let prod_exp = -rat(16) * kappa * rat((e.len() * n) as i64);
    let cont_p = p.content()?;
    let hyp2 = Verdict::decide_default("propRter_product_hypothesis", |bits| {
        let mut acc = RealInterval::one();
        for z in &combo_set.points {
            acc = &acc * &p.eval_enclosure(z, bits).abs(bits);
        }
        let _ = &cont_p;
        (acc.round_out(bits + 32), x_power(x, &prod_exp, bits))
    });
    if !hyp2.holds() {
        return Err(GlError::HypothesisRejected(format!(
            "product hypothesis is {}",
            hyp2.outcome
        )));
    }
    let mut trace = PipelineTrace::default();
    trace.push("hypothesis:X_bounds", &x.to_string(), hyp1);
    trace.push("hypothesis:product", &p.to_text(), hyp2);
    // stage 1: linearization b) with rho = 1, c = 8 kappa |E|: a power Q of
    // an irreducible factor with deg <= n, H <= X^2, product <= X^{-2k|E|n}
    let c_lin = rat(8) * kappa * rat(e.len() as i64);
    let rho = rat(1);
    let (r, v_lin) = factorgcd::linearize_a(p, n, x, &c_lin, &rho, &combo_set)?;
    let (q, _k, v_pow) = factorgcd::linearize_b(&r, n, x, &combo_set, &c_lin, &rho)?;
    if q.coeffs().iter().take(q.deg()).all(|c| c.is_zero()) {
        return Err(GlError::InternalBug("Q is a power of T against the hypotheses".into()));
    }
    trace.push("linearize:power", &q.to_text(), Verdict::all("propRter_linearize", &[v_lin, v_pow]));
    // translates Q(aT), primitive height bound H(Q(aT)) <= X^{2+2eps}
    let translates: Vec<RatPoly> = a
        .elements()
        .iter()
        .map(|s| AffineMap::scaling(s.clone()).and_then(|m| Ok(m.apply(&q))))
        .collect::<Result<_, _>>()?;
    // stage 2: phi table and pairwise budgets
    let kap_eps = kappa + epsilon;
    let pair_budget = rat(6) - rat(3) * epsilon;
    let mut pair_parts = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let ti = translates[i].clone();
            let tj = translates[j].clone();
            let v = Verdict::decide_default(format!("propRter_pair_{i}_{j}"), |bits| {
                let mut sum = RealInterval::zero();
                for z in &e.points {
                    let pi = phi_entry(&ti, z, x, epsilon, n, bits);
                    let pj = phi_entry(&tj, z, x, epsilon, n, bits);
                    let m = match (pi, pj) {
                        (Ok(Some(u)), Ok(Some(v))) => u.min(&v),
                        (Ok(None), Ok(Some(v))) | (Ok(Some(v)), Ok(None)) => v,
                        // both zero would contradict coprimality; force a
                        // failure the caller can see
                        _ => RealInterval::point(pair_budget.clone() + rat(1)),
                    };
                    sum = &sum + &m;
                }
                (sum, RealInterval::point(pair_budget.clone()))
            });
            pair_parts.push(v);
        }
    }
    trace.push("zarankiewicz:pairwise", &q.to_text(), Verdict::all("propRter_pairs", &pair_parts));
    // aggregate sum phi >= 2 kappa |E|
    let agg_lhs = rat(2) * kappa * rat(e.len() as i64);
    let v_agg = Verdict::decide_default("propRter_aggregate", |bits| {
        let mut sum = RealInterval::zero();
        let mut unbounded = false;
        for t in &translates {
            for z in &e.points {
                match phi_entry(t, z, x, epsilon, n, bits) {
                    Ok(Some(v)) => sum = &sum + &v,
                    Ok(None) => unbounded = true,
                    Err(_) => {}
                }
            }
        }
        if unbounded {
            // an exact zero makes the sum infinite; any bound holds
            (RealInterval::point(agg_lhs.clone()), RealInterval::point(agg_lhs.clone() + rat(1)))
        } else {
            (RealInterval::point(agg_lhs.clone()), sum)
        }
    });
    trace.push("zarankiewicz:aggregate", &q.to_text(), v_agg);
    // stage 3: locate (a, xi) with phi > kappa + eps
    let mut located: Option<(usize, usize)> = None;
    'search: for bits in [128u32, 256, 512, 1024, 2048, 4096] {
        for (ai, t) in translates.iter().enumerate() {
            for (zi, z) in e.points.iter().enumerate() {
                match phi_entry(t, z, x, epsilon, n, bits) {
                    Ok(None) => {
                        located = Some((ai, zi));
                        break 'search;
                    }
                    Ok(Some(v)) if v.lo > kap_eps => {
                        located = Some((ai, zi));
                        break 'search;
                    }
                    _ => {}
                }
            }
        }
    }
    let Some((ai, zi)) = located else {
        return Err(GlError::InternalBug(
            "no phi entry exceeds kappa + eps, contradicting the proof".into(),
        ));
    };
    let s_poly = translates[ai].clone();
    let xi = e.points[zi].clone();
    // final: deg <= n, H <= X^{2+2eps}, |S(xi)|/||S|| <= X^{-kappa n}
    let v_deg = Verdict::exact("propRter_final_degree", rat(s_poly.deg() as i64), rat(n as i64));
    let hs = s_poly.height()?;
    let h_exp = rat(2) + rat(2) * epsilon;
    let v_height = Verdict::decide_default("propRter_final_height", |bits| {
        (RealInterval::point(hs.clone()), x_power(x, &h_exp, bits))
    });
    let norm_s = s_poly.norm()?;
    let final_exp = -(kappa * rat(n as i64));
    let v_final = Verdict::decide_default("propRter_final_value", |bits| {
        let lhs = s_poly
            .eval_enclosure(&xi, bits)
            .abs(bits)
            .div(&RealInterval::point(norm_s.clone()))
            .expect("norm > 0");
        (lhs, x_power(x, &final_exp, bits))
    });
    trace.push(
        "final:translate",
        &s_poly.to_text(),
        Verdict::all("propRter_final", &[v_deg, v_height, v_final]),
    );
    require_holds(&trace)?;
    Ok((s_poly, xi, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn primes_scale_set(k: usize) -> ScaleSet {
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        ScaleSet::from_ints(&primes[..k]).unwrap()
    }

    #[test]
    fn prop_q_identity() {
        // maps = {identity}, t = 1: Q is the primitive part of P
        let p = RatPoly::from_ints(&[2, 0, 4]);
        let e = EvalPointSet::from_ints(&[1]).unwrap();
        let (q, _d, v) = run_prop_q(&p, &[AffineMap::identity()], &e, 1, 2).unwrap();
        assert_eq!(q, RatPoly::from_ints(&[1, 0, 2]));
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn prop_q_two_scalings() {
        // P = ((T-1)(2T-1))^2, maps = {id, T->2T}: the gcd retains the
        // factor shared between P(T) and P(2T)
        let p = RatPoly::from_ints(&[-1, 1]).mul(&RatPoly::from_ints(&[-1, 2])).pow(2);
        let maps = [AffineMap::identity(), AffineMap::from_ints(2, 0).unwrap()];
        let e = EvalPointSet::from_ints(&[1]).unwrap();
        let (q, _d, v) = run_prop_q(&p, &maps, &e, 1, 8).unwrap();
        assert_eq!(q, RatPoly::from_ints(&[1, -4, 4])); // (2T-1)^2
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn prop_r_synthetic() {
        // P = (2T-1)^8 vanishes to high order at 1/2: every stage holds
        let p = RatPoly::from_ints(&[-1, 2]).pow(8);
        let maps = [AffineMap::identity()];
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let x = rat(6561); // 3^8
        let (s, xi, trace) = run_prop_r(&p, &maps, &e, 1, 1, 8, &x, &rat(28)).unwrap();
        assert!(trace.holds());
        assert!(s.deg() <= 40);
        assert!(xi.as_exact_rational().unwrap() == ratio(1, 2));
        // the certificate re-verifies from (S, xi, params) alone
        let cont = s.content().unwrap();
        assert!(cont.is_one());
    }

    #[test]
    fn prop_r_rejects_small_kappa() {
        let p = RatPoly::from_ints(&[-1, 2]).pow(8);
        let maps = [AffineMap::identity()];
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        match run_prop_r(&p, &maps, &e, 1, 1, 8, &rat(6561), &rat(20)) {
            Err(GlError::HypothesisRejected(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn prop_r_rejects_small_x() {
        let p = RatPoly::from_ints(&[-1, 2]).pow(8);
        let maps = [AffineMap::identity()];
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        // X = 100 < 3^8
        match run_prop_r(&p, &maps, &e, 1, 1, 8, &rat(100), &rat(28)) {
            Err(GlError::HypothesisRejected(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    fn rbis_fixture(k: usize) -> (RatPoly, ScaleSet, EvalPointSet, BigRational) {
        // P = prod over the first k primes of (2T - p)^2: double zeros at
        // every p/2, and all translates P(aT) share the factor (2T-1)^2
        let a = primes_scale_set(k);
        let mut p = RatPoly::one();
        for v in a.elements() {
            let lin = RatPoly::from_coeffs(vec![-v.clone(), rat(2)]);
            p = p.mul(&lin).mul(&lin);
        }
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        // X = (10 c_A)^{10 n} comfortably dominates all lower bounds
        let n = 2 * k;
        let x = pow_rat(&(rat(10) * a.c_a()), 10 * n as u32);
        (p, a, e, x)
    }

    #[test]
    fn prop_rbis_synthetic() {
        // s = 9 primes, l = 0, n = 18 <= N(9, 0) = 18
        let (p, a, e, x) = rbis_fixture(9);
        let eps = ratio(1, 10);
        let (s, trace) = run_prop_rbis(&p, &a, &e, 1, 0, 18, &x, &rat(6), &eps).unwrap();
        assert!(trace.holds(), "failing stage: {:?}", trace.first_failure().map(|r| &r.stage));
        // S is a power of (2T - 1), primitive
        assert!(s.coeffs().iter().all(|c| c.denom().is_one()));
        assert_eq!(s.eval_rational(&ratio(1, 2)), rat(0));
        assert!(s.deg() <= 2 * 18 / 9);
    }

    #[test]
    fn prop_rbis_strip_stage() {
        // s = 10 primes, P = T * Ptilde: the strip stage removes T
        let (pt, a, e, x) = rbis_fixture(10);
        let p = RatPoly::from_ints(&[0, 1]).mul(&pt);
        let eps = ratio(1, 10);
        let (s, trace) = run_prop_rbis(&p, &a, &e, 1, 0, 22, &x, &rat(6), &eps).unwrap();
        assert!(trace.holds());
        assert_eq!(s.eval_rational(&ratio(1, 2)), rat(0));
    }

    #[test]
    fn prop_rbis_rejects_dependent_a() {
        let (p, _a, e, x) = rbis_fixture(9);
        let dep = ScaleSet::from_ints(&[2, 3, 6]).unwrap();
        match run_prop_rbis(&p, &dep, &e, 1, 0, 18, &x, &rat(6), &ratio(1, 10)) {
            Err(GlError::Precondition(_)) => {}
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn prop_rter_synthetic() {
        // P = (T-1)^2 (2T-3)^2 vanishes at both 2*(1/2) and 3*(1/2)
        let p = RatPoly::from_ints(&[-1, 1]).pow(2).mul(&RatPoly::from_ints(&[-3, 2]).pow(2));
        let a = ScaleSet::from_ints(&[2, 3]).unwrap();
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let x = pow_rat(&rat(2), 90);
        let eps = ratio(1, 10);
        let (s, xi, trace) = run_prop_rter(&p, &a, &e, 4, &x, &rat(6), &eps).unwrap();
        assert!(trace.holds(), "failing stage: {:?}", trace.first_failure().map(|r| &r.stage));
        assert!(s.deg() <= 4);
        // the located translate vanishes at xi
        let z = xi.as_exact_rational().unwrap();
        assert_eq!(s.eval_rational(&z), rat(0));
    }

    #[test]
    fn prop_rter_rejects_large_product() {
        // no small values at all
        let p = RatPoly::from_ints(&[1, 0, 0, 0, 1]);
        let a = ScaleSet::from_ints(&[2, 3]).unwrap();
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let x = pow_rat(&rat(2), 90);
        match run_prop_rter(&p, &a, &e, 4, &x, &rat(6), &ratio(1, 10)) {
            Err(GlError::HypothesisRejected(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn prop_rter_epsilon_range() {
        let p = RatPoly::from_ints(&[-1, 1]).pow(2).mul(&RatPoly::from_ints(&[-3, 2]).pow(2));
        let a = ScaleSet::from_ints(&[2, 3]).unwrap();
        let e = EvalPointSet::from_rationals(&[ratio(1, 2)]).unwrap();
        let x = pow_rat(&rat(2), 90);
        // eps = 1/10 boundary accepted
        assert!(run_prop_rter(&p, &a, &e, 4, &x, &rat(6), &ratio(1, 10)).is_ok());
        // eps > 1/10 rejected
        match run_prop_rter(&p, &a, &e, 4, &x, &rat(6), &ratio(1, 5)) {
            Err(GlError::Precondition(_)) => {}
            other => panic!("expected precondition error, got {other:?}"),
        }
    }
}
