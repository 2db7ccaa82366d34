use dlv_symmetry::detsys::{determining_equations, determining_system, evaluate_at, first_type_determining_equations};
use dlv_symmetry::expr::{parse, Dep, Expr};
use dlv_symmetry::harness::equalize_diffusivities;
use dlv_symmetry::jet::VectorField;
use dlv_symmetry::model::{parse_system, DlvSystem, ManifoldKind, RdSystem};

fn symbolic() -> RdSystem {
    DlvSystem::symbolic().to_rd().unwrap()
}

#[test]
fn named_lie_equations_are_generated() {
    let lie = determining_equations(&symbolic()).unwrap();
    for eq in ["xi0_x", "xi0_u", "eta1_uu", "2*xi1_x - xi0_t", "2*eta1_xu + lambda1*xi1_t"] {
        assert!(lie.contains(&parse(eq).unwrap()), "{eq}");
    }
    assert!(lie.contains(&parse("-3*xi0_x").unwrap()));
    assert!(!lie.contains(&parse("xi1_x").unwrap()));
}

#[test]
fn equal_diffusivities_collapse_to_lie() {
    let sys = equalize_diffusivities(&symbolic()).unwrap();
    let lie = determining_equations(&sys).unwrap();
    for p in Dep::ALL {
        let ft = first_type_determining_equations(&sys, p).unwrap();
        assert_eq!(ft.equations, lie.equations, "pivot {p}");
    }
}

#[test]
fn distinct_diffusivities_keep_conditional_freedom() {
    let sys = symbolic();
    let lie = determining_equations(&sys).unwrap();
    let ft = first_type_determining_equations(&sys, Dep::U).unwrap();
    assert_ne!(ft.equations, lie.equations);
}

#[test]
fn principal_operators_solve_the_lie_system() {
    let lie = determining_equations(&symbolic()).unwrap();
    for q in [
        VectorField::parse("1", "0", ["0", "0", "0"]).unwrap(),
        VectorField::parse("0", "1", ["0", "0", "0"]).unwrap(),
    ] {
        assert!(lie.evaluate_at(&q).iter().all(Expr::is_zero));
    }
    let dilation = VectorField::parse("2*t", "x", ["-2*u", "-2*v", "-2*w"]).unwrap();
    assert!(lie.equations.iter().any(|e| !evaluate_at(e, &dilation).is_zero()));
}

#[test]
fn heat_system_admits_galilei_boosts() {
    let sys = parse_system(
        "lambda1 = 1\nlambda2 = 2\nlambda3 = 3\nC1 = 0\nC2 = 0\nC3 = 0\n",
    )
    .unwrap()
    .rd()
    .unwrap();
    let lie = determining_system(&sys, ManifoldKind::Lie).unwrap();
    assert!(lie.contains(&parse("xi0_x").unwrap()));
    let boost = VectorField::parse("0", "2*t", ["-x*u", "-2*x*v", "-3*x*w"]).unwrap();
    assert!(lie.evaluate_at(&boost).iter().all(Expr::is_zero));
}

#[test]
fn printed_equations_are_stable() {
    let a = determining_equations(&symbolic()).unwrap().sorted();
    let b = determining_equations(&symbolic()).unwrap().sorted();
    assert_eq!(a, b);
    assert!(a.iter().any(|s| s == "2*xi1_x - xi0_t"));
}
