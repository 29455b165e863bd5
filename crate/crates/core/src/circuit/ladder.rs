use super::{CircuitError, Network, SolveResult, SolverMode};
use crate::geometry::ChainConfig;
use num_complex::Complex64;

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Reflected impedances `[Z_n, …, Z_1, Z_in]`: `Z_k` is what the coils
/// downstream of relay `k` present to relay `k`, `Z_in` what the whole chain
/// presents to the reader.
pub fn reflected_impedances(
    net: &Network,
    mode: SolverMode,
) -> Result<Vec<Complex64>, CircuitError> {
    match mode {
        SolverMode::CorrectedPhasor => Ok(corrected_reflections(net)?.0),
        SolverMode::PaperLiteral => literal_reflections(net)
            .map(|z| z.into_iter().map(|v| Complex64::new(v, 0.0)).collect()),
    }
}

fn reflect(omega: f64, m: f64, downstream: Complex64, stage: &str) -> Result<Complex64, CircuitError> {
    if m == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if downstream.norm() == 0.0 {
        return Err(CircuitError::DivisionByZero(stage.to_string()));
    }
    Ok(omega * omega * m * m / downstream)
}

/// Returns the reflections and the total loop impedance of each downstream
/// mesh (`[relay 1, …, relay n, tag]`), self plus reflected.
fn corrected_reflections(
    net: &Network,
) -> Result<(Vec<Complex64>, Vec<Complex64>), CircuitError> {
    let n = net.n_relays();
    let w = net.omega;
    let mut totals = vec![Complex64::new(0.0, 0.0); n + 1];
    totals[n] = net.tag.impedance(w);
    let mut reflections = Vec::with_capacity(n + 1);
    for k in (0..n).rev() {
        let z = reflect(w, net.coupling[k + 1], totals[k + 1], &format!("mesh {}", k + 2))?;
        reflections.push(z);
        totals[k] = net.relays[k].impedance(w) + z;
    }
    reflections.push(reflect(w, net.coupling[0], totals[0], "mesh 1")?);
    Ok((reflections, totals))
}

fn literal_reflections(net: &Network) -> Result<Vec<f64>, CircuitError> {
    let n = net.n_relays();
    let w = net.omega;
    let m = &net.coupling;
    let tag = &net.tag;
    // Z_n = M_(n)(o) R_o / L_o², M not squared
    let first = m[n] * tag.load / (tag.inductance * tag.inductance);
    let mut out = vec![first];
    if n == 0 {
        return Ok(out);
    }
    let mut z = first;
    for k in (1..n).rev() {
        // Z_{k-1} = ω² M²_{(k-1)(k)} / (Z_k + R_k), indices 1-based over relays
        let denom = z + net.relays[k].resistance;
        if denom == 0.0 {
            return Err(CircuitError::DivisionByZero(format!("Z_{} + R_{}", k + 1, k + 1)));
        }
        z = w * w * m[k] * m[k] / denom;
        out.push(z);
    }
    // Z_in = ω² M²_(in)(1) / Z_1
    let z_in = if m[0] == 0.0 {
        0.0
    } else if z == 0.0 {
        return Err(CircuitError::DivisionByZero("Z_1".to_string()));
    } else {
        w * w * m[0] * m[0] / z
    };
    out.push(z_in);
    Ok(out)
}

/// Solve a resolved network with the ladder recursion.
pub fn solve_network(net: &Network, mode: SolverMode) -> Result<SolveResult, CircuitError> {
    match mode {
        SolverMode::CorrectedPhasor => solve_corrected(net),
        SolverMode::PaperLiteral => solve_literal(net),
    }
}

/// Mutual inductances from the placements, then the ladder solve.
pub fn solve_chain(config: &ChainConfig, mode: SolverMode) -> Result<SolveResult, CircuitError> {
    solve_network(&Network::from_config(config)?, mode)
}

fn solve_corrected(net: &Network) -> Result<SolveResult, CircuitError> {
    let n = net.n_relays();
    let w = net.omega;
    let (reflections, totals) = corrected_reflections(net)?;
    let z_in = *reflections.last().expect("at least the reader reflection");

    let i_in = Complex64::new(net.source_current, 0.0);
    let mut currents = Vec::with_capacity(n + 2);
    currents.push(net.source_current);
    let mut upstream = i_in;
    let mut coil_current = i_in;
    for k in 0..=n {
        coil_current = if net.coupling[k] == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            -J * w * net.coupling[k] * upstream / totals[k]
        };
        if k < n {
            currents.push(coil_current.norm());
        }
        upstream = coil_current;
    }
    let load_current = net.tag.load_current(coil_current, w);
    currents.push(load_current.norm());

    let output_power = load_current.norm_sqr() * net.tag.load;
    let input_power = (net.reader.resistance + z_in.re) * net.source_current * net.source_current;
    let efficiency = output_power / input_power;
    if efficiency > 1.0 + 1e-9 {
        return Err(CircuitError::Nonphysical(efficiency));
    }
    Ok(SolveResult {
        currents,
        tag_coil_current: coil_current.norm(),
        input_power,
        output_power,
        efficiency,
        input_impedance: z_in,
    })
}

fn solve_literal(net: &Network) -> Result<SolveResult, CircuitError> {
    let n = net.n_relays();
    let w = net.omega;
    let m = &net.coupling;
    let reflections = literal_reflections(net)?;
    let z_in = *reflections.last().expect("non-empty");
    // reflections run Z_n … Z_1; relay k (1-based) sees reflections[n - k]
    let z_of = |k: usize| reflections[n - k];

    let mut currents = Vec::with_capacity(n + 2);
    currents.push(net.source_current);
    let mut upstream = net.source_current;
    for k in 1..=n {
        let denom = net.relays[k - 1].resistance + z_of(k);
        if denom == 0.0 {
            return Err(CircuitError::DivisionByZero(format!("R_{k} + Z_{k}")));
        }
        // I_k = ω² M_{(k-1)(k)} I_{k-1} / (R_k + Z_k)
        let i_k = w * w * m[k - 1] * upstream / denom;
        currents.push(i_k);
        upstream = i_k;
    }
    // I_o = M_(n)(o) I_n / L_o
    let i_o = m[n] * upstream / net.tag.inductance;
    currents.push(i_o.abs());

    let output_power = i_o * i_o * net.tag.load;
    let i_in = net.source_current;
    let input_power = (z_in + w * net.reader.inductance) * i_in * i_in;
    // no tank in this model, so coil and load current coincide
    Ok(SolveResult {
        currents,
        tag_coil_current: i_o.abs(),
        input_power,
        output_power,
        efficiency: output_power / input_power,
        input_impedance: Complex64::new(z_in, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::mesh_solve_network;
    use crate::circuit::test_support::{bench, chain_of};

    #[test]
    fn zero_coupling_reflects_nothing() {
        let cfg = chain_of(3, 0.05);
        let net = Network::with_coupling(&cfg, vec![0.0; 4]).unwrap();
        for z in reflected_impedances(&net, SolverMode::CorrectedPhasor).unwrap() {
            assert_eq!(z, Complex64::new(0.0, 0.0));
        }
        let literal = reflected_impedances(&net, SolverMode::PaperLiteral).unwrap();
        assert!(literal.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn direct_reader_to_tag_matches_mesh() {
        let cfg = chain_of(0, 0.04);
        let net = Network::from_config(&cfg).unwrap();
        let z = reflected_impedances(&net, SolverMode::CorrectedPhasor).unwrap();
        assert_eq!(z.len(), 1);
        let mesh = mesh_solve_network(&net).unwrap();
        assert!((z[0] - mesh.input_impedance).norm() / mesh.input_impedance.norm() < 1e-9);
    }

    #[test]
    fn input_reflection_scales_with_square_of_coupling() {
        let cfg = chain_of(2, 0.05);
        let net = Network::from_config(&cfg).unwrap();
        let mut doubled = net.clone();
        doubled.coupling[0] *= 2.0;
        for mode in [SolverMode::CorrectedPhasor, SolverMode::PaperLiteral] {
            let a = *reflected_impedances(&net, mode).unwrap().last().unwrap();
            let b = *reflected_impedances(&doubled, mode).unwrap().last().unwrap();
            assert!((b / a - 4.0).norm() < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn no_coupling_to_tag_means_no_output() {
        let cfg = chain_of(2, 0.05);
        let mut net = Network::from_config(&cfg).unwrap();
        net.coupling[2] = 0.0;
        for mode in [SolverMode::CorrectedPhasor, SolverMode::PaperLiteral] {
            let r = solve_network(&net, mode).unwrap();
            assert_eq!(r.output_current(), 0.0);
            assert_eq!(r.output_power, 0.0);
            assert_eq!(r.efficiency, 0.0);
        }
    }

    #[test]
    fn linear_in_source_current() {
        let cfg = bench();
        let base = solve_chain(&cfg, SolverMode::CorrectedPhasor).unwrap();
        let mut twice = cfg.clone();
        twice.reader.current *= 2.0;
        let r = solve_chain(&twice, SolverMode::CorrectedPhasor).unwrap();
        for (a, b) in base.currents.iter().zip(&r.currents) {
            assert!((b / a - 2.0).abs() < 1e-12);
        }
        assert!((r.output_power / base.output_power - 4.0).abs() < 1e-12);
        assert!((r.efficiency - base.efficiency).abs() < 1e-12 * base.efficiency);
    }

    #[test]
    fn literal_mode_follows_its_recursion() {
        let cfg = chain_of(1, 0.05);
        let net = Network::from_config(&cfg).unwrap();
        let r = solve_network(&net, SolverMode::PaperLiteral).unwrap();
        let (w, m0, m1) = (net.omega, net.coupling[0], net.coupling[1]);
        let z1 = m1 * net.tag.load / net.tag.inductance.powi(2);
        let z_in = w * w * m0 * m0 / z1;
        let i1 = w * w * m0 * net.source_current / (net.relays[0].resistance + z1);
        let io = m1 * i1 / net.tag.inductance;
        assert!((r.currents[1] - i1).abs() <= 1e-12 * i1);
        assert!((r.output_current() - io).abs() <= 1e-12 * io);
        assert!((r.input_impedance.re - z_in).abs() <= 1e-12 * z_in);
        let p_in = (z_in + w * net.reader.inductance) * net.source_current.powi(2);
        assert!((r.input_power - p_in).abs() <= 1e-12 * p_in);
    }

    #[test]
    fn efficiency_times_input_is_output() {
        for n in [0, 1, 3] {
            let r = solve_chain(&chain_of(n, 0.05), SolverMode::CorrectedPhasor).unwrap();
            assert!((r.efficiency * r.input_power - r.output_power).abs() <= 1e-9 * r.output_power);
            assert!((0.0..=1.0).contains(&r.efficiency));
        }
    }
}
