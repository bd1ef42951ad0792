// debug scratch
use polyval_core::cycle::normal_cycle;
use polyval_core::form::{DifferentialForm, SupportBox};
use polyval_core::integrate::integrate;
use polyval_core::quadrature::QuadratureRule;
use polyval_core::linalg::Point;
use polyval_core::polytope::Polytope;

fn pt(c: &[i64]) -> Point { Point::from_ints(c) }

fn main() {
    let rule = QuadratureRule::default();
    let supp = |n| SupportBox::cube(n, 10.0, 2.0);
    let cases: Vec<(&str, Polytope)> = vec![
        ("point", Polytope::convex_hull(&[pt(&[3, 4])]).unwrap()),
        ("segment1d", Polytope::convex_hull(&[pt(&[0]), pt(&[2])]).unwrap()),
        ("square", Polytope::convex_hull(&[pt(&[0,0]), pt(&[1,0]), pt(&[0,1]), pt(&[1,1])]).unwrap()),
        ("triangle", Polytope::convex_hull(&[pt(&[0,0]), pt(&[3,1]), pt(&[1,2])]).unwrap()),
        ("seg2d", Polytope::convex_hull(&[pt(&[0,0]), pt(&[2,1])]).unwrap()),
    ];
    for (name, p) in cases {
        let n = p.ambient_dim();
        let nc = normal_cycle(&p).unwrap();
        let gauss = DifferentialForm::sphere_area_form(n, supp(n));
        let v = integrate(&nc, &gauss, &rule).unwrap();
        println!("{name}: n={n} gauss={v:.12} err={:.3e}", (v-1.0).abs());
        for ord in [8, 16, 32, 48] {
            let r = QuadratureRule::with_order(ord);
            let v = integrate(&nc, &gauss, &r).unwrap();
            println!("   order {ord}: {v:.14}");
        }
    }
}
