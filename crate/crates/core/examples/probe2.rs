// Scratch timing probe for membership and rendering; not a deliverable.
use locus_core::ifs::Params;
use locus_core::render::{classify, membership, PixelClass, RenderJob, Status};

fn main() {
    // A1-style: trivial-region survival at depth 30.
    let mut rng: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        rng
    };
    let t = std::time::Instant::now();
    let mut worst = std::time::Duration::ZERO;
    let mut fails = 0;
    let mut n = 0;
    while n < 300 {
        let g = (next() % 2_000_000) as f64 / 1_000_000.0 - 1.0;
        let l = (next() % 2_000_000) as f64 / 1_000_000.0 - 1.0;
        let prod = (g * l).abs();
        if !(0.5..0.98).contains(&prod) {
            continue;
        }
        n += 1;
        let p = Params::new(g, l).unwrap();
        let t1 = std::time::Instant::now();
        let r = membership(&p, 30).unwrap();
        worst = worst.max(t1.elapsed());
        if r.status != Status::Survived {
            fails += 1;
            println!("FAIL at ({g:.4}, {l:.4}) escaped at {}", r.depth);
        }
    }
    println!("A1 probe: {n} params, {fails} failures, total {:?}, worst {:?}", t.elapsed(), worst);

    // A8-style: small render first.
    for (res, depth) in [(64usize, 20u32), (128, 25), (256, 25)] {
        let t = std::time::Instant::now();
        let job = RenderJob {
            window: (0.5, 1.0, 0.5, 1.0),
            res,
            max_depth: depth,
            tile: 32.min(res),
        };
        let classes = classify(&job).unwrap();
        let survived = classes
            .iter()
            .filter(|c| matches!(c, PixelClass::Survived | PixelClass::Trivial))
            .count();
        let trivial = classes
            .iter()
            .filter(|c| matches!(c, PixelClass::Trivial))
            .count();
        println!(
            "render {res}x{res} depth {depth}: trivial {:.3} survived {:.3} [{:?}]",
            trivial as f64 / classes.len() as f64,
            survived as f64 / classes.len() as f64,
            t.elapsed()
        );
    }
}
