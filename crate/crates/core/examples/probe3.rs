// Scratch: construct a coefficient sequence whose series has a tight
// triple of real zeros (a numerically order-3 sign change), by a
// sign-stratified beam driving f, f', f'' down their tail capacities.
// Output gets frozen into a test.
use locus_core::bseries::{find_real_zeros, property_u_probe, BSeries, Trunc};

const LAM: f64 = 0.95;

fn caps(n: usize) -> [f64; 3] {
    let nf = n as f64;
    let om = 1.0 - LAM;
    let c0 = LAM.powf(nf + 1.0) / om;
    let c1 = ((nf + 1.0) * LAM.powf(nf) * om + LAM.powf(nf + 1.0)) / (om * om);
    let c2 = (nf + 1.0) * nf * LAM.powf(nf - 1.0) / om
        + 2.0 * (nf + 1.0) * LAM.powf(nf) / (om * om)
        + 2.0 * LAM.powf(nf + 1.0) / (om * om * om);
    [c0, c1, c2]
}

#[derive(Clone, Copy)]
struct State {
    r: [f64; 3],
    d3: f64,
    parent: u32,
    digit: i8,
}

fn main() {
    let n_max: usize = 520;
    let beam_width = 30000;

    let mut arena: Vec<State> = vec![State {
        r: [1.0, 0.0, 0.0],
        d3: 0.0,
        parent: u32::MAX,
        digit: 1,
    }];
    let mut frontier: Vec<u32> = vec![0];

    for n in 1..=n_max {
        let nf = n as f64;
        let pws = [
            LAM.powf(nf),
            nf * LAM.powf(nf - 1.0),
            nf * (nf - 1.0) * LAM.powf(nf - 2.0),
        ];
        let pw3 = if n >= 3 {
            nf * (nf - 1.0) * (nf - 2.0) * LAM.powf(nf - 3.0)
        } else {
            0.0
        };
        let c = caps(n);
        let mut children: Vec<(f64, u32)> = Vec::new();
        for &id in &frontier {
            let s = arena[id as usize];
            for d in [-1i8, 0, 1] {
                let df = d as f64;
                let r = [
                    s.r[0] + df * pws[0],
                    s.r[1] + df * pws[1],
                    s.r[2] + df * pws[2],
                ];
                if r[0].abs() <= c[0] && r[1].abs() <= c[1] && r[2].abs() <= c[2] {
                    let score = (r[0].abs() / c[0])
                        .max(r[1].abs() / c[1])
                        .max(r[2].abs() / c[2]);
                    arena.push(State {
                        r,
                        d3: s.d3 + df * pw3,
                        parent: id,
                        digit: d,
                    });
                    children.push((score, (arena.len() - 1) as u32));
                }
            }
        }
        children.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Sign-stratified keep: digits move all components together, so a
        // frontier homogenized to mixed signs deadlocks later.
        let mut kept: Vec<u32> = Vec::with_capacity(beam_width);
        let mut counts = [0usize; 8];
        let per_bucket = beam_width / 8;
        let mut rest: Vec<u32> = Vec::new();
        for (_, id) in children {
            let st = &arena[id as usize];
            let b = ((st.r[0] >= 0.0) as usize) * 4
                + ((st.r[1] >= 0.0) as usize) * 2
                + ((st.r[2] >= 0.0) as usize);
            if counts[b] < per_bucket {
                counts[b] += 1;
                kept.push(id);
            } else if rest.len() < beam_width {
                rest.push(id);
            }
        }
        for id in rest {
            if kept.len() >= beam_width {
                break;
            }
            kept.push(id);
        }
        frontier = kept;
        if frontier.is_empty() {
            println!("beam died at n = {n}");
            return;
        }
        if n % 100 == 0 {
            let sb = arena[frontier[0] as usize];
            println!(
                "n={n}: frontier {} caps [{:.2e} {:.2e} {:.2e}] best |r| [{:.2e} {:.2e} {:.2e}]",
                frontier.len(),
                c[0],
                c[1],
                c[2],
                sb.r[0].abs(),
                sb.r[1].abs(),
                sb.r[2].abs()
            );
        }
        // Trim the arena to frontier-reachable states to bound memory.
        if n % 40 == 0 {
            let mut keep = vec![false; arena.len()];
            for &id in &frontier {
                let mut cur = id;
                while cur != u32::MAX && !keep[cur as usize] {
                    keep[cur as usize] = true;
                    cur = arena[cur as usize].parent;
                }
            }
            let mut remap = vec![u32::MAX; arena.len()];
            let mut compact: Vec<State> = Vec::new();
            for (i, k) in keep.iter().enumerate() {
                if *k {
                    remap[i] = compact.len() as u32;
                    let mut s = arena[i];
                    if s.parent != u32::MAX {
                        s.parent = remap[s.parent as usize];
                    }
                    compact.push(s);
                }
            }
            for id in frontier.iter_mut() {
                *id = remap[*id as usize];
            }
            arena = compact;
        }
    }

    // Select a state whose local cubic model has three distinct real roots
    // with a tight span.
    let mut picked: Option<(f64, u32, f64)> = None;
    for &id in &frontier {
        let s = arena[id as usize];
        let (e0, e1, e2, c3) = (s.r[0], s.r[1], s.r[2] / 2.0, s.d3 / 6.0);
        if c3 == 0.0 {
            continue;
        }
        let (a, b, cc, dd) = (c3, e2, e1, e0);
        let p = (3.0 * a * cc - b * b) / (3.0 * a * a);
        let q = (2.0 * b * b * b - 9.0 * a * b * cc + 27.0 * a * a * dd) / (27.0 * a * a * a);
        let disc = -4.0 * p * p * p - 27.0 * q * q;
        if disc <= 0.0 || p >= 0.0 {
            continue;
        }
        let span = 2.0 * (-p / 3.0).sqrt() * 3.0f64.sqrt();
        if !(5e-6..=9e-5).contains(&span) {
            continue;
        }
        let quality = s.r[0].abs();
        if picked.map(|(qv, _, _)| quality < qv).unwrap_or(true) {
            picked = Some((quality, id, span));
        }
    }
    let Some((_, best, span)) = picked else {
        println!("no 3-real-root candidate in frontier");
        for &id in frontier.iter().take(8) {
            let s = arena[id as usize];
            println!(
                "  f={:.2e} f'={:.2e} f''={:.2e} f'''={:.2e}",
                s.r[0], s.r[1], s.r[2], s.d3
            );
        }
        return;
    };
    let s = arena[best as usize];
    println!(
        "chosen: f={:.3e} f'={:.3e} f''={:.3e} f'''={:.3e} span~{:.2e}",
        s.r[0], s.r[1], s.r[2], s.d3, span
    );
    let mut digits = Vec::new();
    let mut cur = best;
    while cur != u32::MAX {
        digits.push(arena[cur as usize].digit);
        cur = arena[cur as usize].parent;
    }
    digits.reverse();
    let text: String = digits
        .iter()
        .map(|&d| match d {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect();
    println!("series ({} coeffs):\n{text}", digits.len());

    let f = BSeries::finite(digits).unwrap();
    for k in 0..4 {
        let v = f.eval_derivative(LAM, k, Trunc::Infinite).unwrap();
        println!("f^({k})({LAM}) = {v:.4e}");
    }
    let zs = find_real_zeros(&f, Trunc::Infinite, (0.9, 0.99), 1e-3, 1e-15).unwrap();
    for z in &zs {
        println!(
            "zero at {:.12} order {} sign_change {} residual {:.2e}",
            z.location, z.order_estimate, z.is_sign_change, z.residual
        );
    }
    if let Some(z) = zs
        .iter()
        .find(|z| (z.location - LAM).abs() < 5e-3 && z.is_sign_change)
    {
        let v = property_u_probe(&f, z.location, &[1e-2, 1e-3, 1e-4], 600);
        println!("probe verdict: {v:?}");
    }
}
