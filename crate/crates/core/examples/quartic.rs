fn main() {
    // moments of x1^{2k} over S^2 are 4π/(2k+1)
    let exact = 4.0 * std::f64::consts::PI / 7.0;
    for f in [4usize, 6, 8, 12, 16, 24] {
        let g = minklab::grid::build_grid(3, f).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|n| n[0].powi(6)).collect();
        let err = (g.integrate(&v).unwrap() - exact).abs();
        println!("f={f:3}  nodes={:5}  sextic err={err:.3e}", g.node_count());
    }
}
