use super::{CircuitError, Network, SolveResult};
use crate::geometry::ChainConfig;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Dense phasor mesh solve over the downstream meshes `[relay 1, …, relay n, tag]`,
/// with the reader current imposed as a source.
pub fn mesh_solve_network(net: &Network) -> Result<SolveResult, CircuitError> {
    let n = net.n_relays();
    let size = n + 1;
    let w = net.omega;
    let i_in = Complex64::new(net.source_current, 0.0);

    let mut z = DMatrix::<Complex64>::zeros(size, size);
    let mut rhs = DVector::<Complex64>::zeros(size);
    for k in 0..size {
        z[(k, k)] = net.mesh_impedance(k);
    }
    // coil index c (0 = reader) maps to mesh c - 1
    let mut couple = |a: usize, b: usize, m: f64| {
        let jwm = J * w * m;
        match (a, b) {
            (0, 0) => {}
            (0, c) | (c, 0) => rhs[c - 1] -= jwm * i_in,
            (a, b) => {
                z[(a - 1, b - 1)] += jwm;
                z[(b - 1, a - 1)] += jwm;
            }
        }
    };
    for (k, &m) in net.coupling.iter().enumerate() {
        couple(k, k + 1, m);
    }
    for &(a, b, m) in &net.cross {
        couple(a, b, m);
    }

    let currents = z.lu().solve(&rhs).ok_or(CircuitError::SingularMatrix)?;
    if currents.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(CircuitError::SingularMatrix);
    }

    // Voltage induced back in the reader loop by every mesh it couples to.
    let mut back_emf = J * w * net.coupling[0] * currents[0];
    for &(a, b, m) in &net.cross {
        if a == 0 {
            back_emf += J * w * m * currents[b - 1];
        }
    }
    let z_in = back_emf / i_in;

    let load_current = net.tag.load_current(currents[n], w);
    let mut magnitudes = Vec::with_capacity(n + 2);
    magnitudes.push(net.source_current);
    magnitudes.extend(currents.iter().take(n).map(|c| c.norm()));
    magnitudes.push(load_current.norm());

    let output_power = load_current.norm_sqr() * net.tag.load;
    let input_power = (net.reader.resistance + z_in.re) * net.source_current * net.source_current;
    Ok(SolveResult {
        currents: magnitudes,
        tag_coil_current: currents[n].norm(),
        input_power,
        output_power,
        efficiency: output_power / input_power,
        input_impedance: z_in,
    })
}

pub fn mesh_solve(config: &ChainConfig) -> Result<SolveResult, CircuitError> {
    mesh_solve_network(&Network::from_config(config)?)
}
