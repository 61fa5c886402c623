// Scratch probe for tuning raster constants; not part of the deliverable.
use locus_core::bseries::{find_real_zeros, BSeries, Trunc};
use locus_core::ifs::Params;



fn main() {
    // First suitable finite series found by a coarse search (frozen here
    // for speed): two simple sign-change zeros, nontrivial product.
    let mut candidates: Vec<(BSeries, f64, f64)> = Vec::new();
    'outer: for degree in 2..=12usize {
        let count = 2 * 3usize.pow(degree as u32 - 1);
        for idx in 0..count {
            let mut coeffs = vec![1i8];
            let mut rest = idx;
            for _ in 1..degree {
                coeffs.push([0i8, 1, -1][rest % 3]);
                rest /= 3;
            }
            coeffs.push([1i8, -1][rest % 2]);
            let f = BSeries::finite(coeffs).unwrap();
            let zs = find_real_zeros(&f, Trunc::Infinite, (-0.99, 0.99), 2e-3, 1e-13).unwrap();
            let simple: Vec<_> = zs
                .iter()
                .filter(|z| z.is_sign_change && z.order_estimate == 1)
                .collect();
            for i in 0..simple.len() {
                for j in i + 1..simple.len() {
                    let (g, l) = (simple[i].location, simple[j].location);
                    if (g * l).abs() < 0.5 && (g - l).abs() > 1e-6 {
                        candidates.push((f.clone(), g, l));
                        if candidates.len() >= 8 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    // Prefer gentle contraction factors: smaller attractors rasterize well.
    candidates.sort_by(|a, b| {
        let la = a.1.abs().max(a.2.abs());
        let lb = b.1.abs().max(b.2.abs());
        la.total_cmp(&lb)
    });
    for (f, g, l) in &candidates {
        println!(
            "candidate {f} zeros ({g:.6}, {l:.6}) product {:.4} L {:.3}",
            (g * l).abs(),
            g.abs().max(l.abs())
        );
    }

    for (f, g, l) in candidates.iter().take(3) {
        let params = Params::new(*g, *l).unwrap();
        println!("== certify at {f} ({g:.6}, {l:.6})");
        let t = std::time::Instant::now();
        match locus_core::traps::certify_interior(&params, f, 0.05) {
            Ok(out) => {
                for line in &out.trace {
                    println!("  {line}");
                }
                println!(
                    "  -> {} certificates [{:?}]",
                    out.certificates.len(),
                    t.elapsed()
                );
                if let Some(c) = out.certificates.first() {
                    println!(
                        "  CERT m={} eps={:.4e} margins={:?} gap_upper={:.3e} slop={:.3e}",
                        c.order_m,
                        c.disk_eps,
                        c.witnesses.margins,
                        c.tolerances.gap_upper_bound,
                        c.tolerances.slop
                    );
                    break;
                }
            }
            Err(e) => println!("  certify error: {e} [{:?}]", t.elapsed()),
        }
    }
}
