use std::time::Instant;

use tcweight_core::builders::{self, AssertionSet, ClassSpec, GroupPresentation, Space};
use tcweight_core::engine::{certify, Route, Rule};
use tcweight_core::field::FieldSpec;

fn genus_two() -> Space {
  builders::presentation_complex("genus2", GroupPresentation::new(&["a", "b", "c", "d"], &["abABcdCD"]).unwrap())
    .with_assertions(AssertionSet::surface_group("closed surface of genus 2"))
    .with_marked(vec![ClassSpec::generator("u", 2)])
}

fn power_of(space: Space, n: usize) -> Space { builders::product(vec![space; n]).unwrap() }

fn f(p: u64) -> FieldSpec { FieldSpec::new(p).unwrap() }

#[test]
fn two_genus_two_surfaces() {
  let t = Instant::now();
  let c = certify(&power_of(genus_two(), 2), f(3)).unwrap();
  assert_eq!((c.lower, c.upper, c.exact), (8, 8, true));
  assert_eq!(c.route, Route::Theorem(Rule::ThmSpecial));
  eprintln!("F3 n=2: {:?}", t.elapsed());

  let t = Instant::now();
  let c = certify(&power_of(genus_two(), 2), f(2)).unwrap();
  assert!(!c.exact, "char 2 must not close: {:?}", (c.lower, c.upper));
  assert!(c.refusals.iter().any(|r| r.reason.contains("characteristic(F) = 2")));
  eprintln!("F2 n=2: {:?} lower {}", t.elapsed(), c.lower);
}

#[test]
fn three_genus_two_surfaces() {
  for field in [f(3), FieldSpec::rationals()] {
    let t = Instant::now();
    let c = certify(&power_of(genus_two(), 3), field).unwrap();
    assert_eq!((c.lower, c.upper, c.exact), (12, 12, true));
    eprintln!("{field} n=3: {:?} zd {:?}", t.elapsed(), c.zero_div);
  }
}

#[test]
fn torsion_presentation_squared() {
  let x = builders::presentation_complex("a5b5", GroupPresentation::new(&["a", "b"], &["aaaaabbbbb"]).unwrap())
    .with_assertions(AssertionSet { two_aspherical: true, pi1_no_z2: true, pi1_torsion_free: true, ..AssertionSet::default() })
    .with_marked(vec![ClassSpec::generator("v", 2)]);
  let t = Instant::now();
  let c = certify(&power_of(x, 2), f(5)).unwrap();
  eprintln!("a5b5^2: {:?} {:?}", t.elapsed(), (c.lower, c.upper, c.route));
  assert_eq!((c.lower, c.upper, c.exact), (8, 8, true));
}

#[test]
fn open_intervals_stay_bounded() {
  for field in [f(2), FieldSpec::rationals()] {
    let plain = builders::presentation_complex("genus2", GroupPresentation::new(&["a", "b", "c", "d"], &["abABcdCD"]).unwrap())
      .with_marked(vec![ClassSpec::generator("u", 2)]);
    let t = Instant::now();
    let c = certify(&power_of(plain, 3), field).unwrap();
    eprintln!("{field} unasserted n=3: {:?} {:?} zd {:?}", t.elapsed(), (c.lower, c.upper), c.zero_div);
    assert!(!c.exact);
  }
}

#[test]
fn triangulated_genus_two() {
  let space = builders::bundled("genus2")
    .unwrap()
    .with_assertions(AssertionSet::surface_group("closed surface of genus 2"))
    .with_marked(vec![ClassSpec::generator("u", 2)]);
  for field in [FieldSpec::rationals(), f(3), f(5)] {
    let t = Instant::now();
    let c = certify(&space, field).unwrap();
    eprintln!("triangulated {field}: {:?}", t.elapsed());
    assert_eq!((c.lower, c.upper, c.route), (4, 4, Route::Theorem(Rule::ThmSpecial)));
  }
  let torus = builders::bundled("torus").unwrap();
  let c = certify(&torus, FieldSpec::rationals()).unwrap();
  assert_eq!((c.lower, c.upper, c.route), (2, 4, Route::ZeroDivisor));
}
