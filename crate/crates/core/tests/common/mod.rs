//! Shared fixtures: deterministic random generators and the test corpus.
#![allow(dead_code)]

use christol_core::automaton::{Acceptor, Dfao, Direction};
use christol_core::digits::radix;
use christol_core::field::{FieldElement, GaloisField};
use christol_core::sparse::{is_well_ordered, SimpleSparseForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn digits(rng: &mut StdRng, p: u32, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..p) as u8).collect()
}

/// A form with `s` cycles and arbitrary digits, no radix point.
pub fn random_form(rng: &mut StdRng, p: u32, s: usize) -> SimpleSparseForm {
    let v = (0..=s).map(|_| {
        let len = rng.gen_range(0..3);
        digits(rng, p, len)
    });
    let v: Vec<Vec<u8>> = v.collect();
    let w = (0..s)
        .map(|_| {
            let len = rng.gen_range(1..4);
            digits(rng, p, len)
        })
        .collect();
    SimpleSparseForm::new(p, v, w).unwrap()
}

/// A form whose words are canonical base-`p` numerals: the first fixed word
/// starts with a nonzero digit.
pub fn random_integer_form(
    rng: &mut StdRng,
    p: u32,
    s: usize,
    max_cycle: usize,
) -> SimpleSparseForm {
    let mut v: Vec<Vec<u8>> = Vec::new();
    let mut first = vec![rng.gen_range(1..p) as u8];
    let extra = rng.gen_range(0..2);
    first.extend(digits(rng, p, extra));
    v.push(first);
    for _ in 0..s {
        let len = rng.gen_range(0..3);
        v.push(digits(rng, p, len));
    }
    let w = (0..s)
        .map(|_| {
            let len = rng.gen_range(1..=max_cycle);
            digits(rng, p, len)
        })
        .collect();
    SimpleSparseForm::new(p, v, w).unwrap()
}

/// A form with a radix point inside one fixed word.
pub fn random_radix_form(rng: &mut StdRng, p: u32, s: usize) -> SimpleSparseForm {
    let f = random_form(rng, p, s);
    let mut v = f.fixed_words().to_vec();
    let j = rng.gen_range(0..v.len());
    let at = rng.gen_range(0..=v[j].len());
    v[j].insert(at, radix(p));
    SimpleSparseForm::new(p, v, f.cycle_words().to_vec()).unwrap()
}

/// A well-ordered form with a radix point whose words are valid expansions:
/// no leading zero, last digit nonzero.
pub fn random_wo_radix_form(rng: &mut StdRng, p: u32, s: usize) -> SimpleSparseForm {
    loop {
        let f = random_radix_form(rng, p, s);
        let all = f.pump(&vec![0; s]);
        let last = f.fixed_words().last().unwrap();
        if last.last().is_none_or(|&d| d == 0 || d == radix(p)) {
            continue;
        }
        if all.first() == Some(&0) && all.get(1) != Some(&radix(p)) {
            continue;
        }
        if is_well_ordered(&f) {
            return f;
        }
    }
}

/// `Σ α_i [w ∈ A_i]` as an MSD machine over base-`p` digits.
pub fn weighted_machine(
    field: GaloisField,
    parts: &[(Acceptor, FieldElement)],
) -> Dfao<FieldElement> {
    let p = field.characteristic() as usize;
    let mut m = Dfao::constant(p, field.zero(), Direction::Msd);
    for (a, c) in parts {
        m = m
            .product(a, |x, &b| if b { *x + *c } else { *x })
            .unwrap()
            .minimize();
    }
    m
}

pub fn indicator_machine(acceptor: &Acceptor, value: FieldElement) -> Dfao<FieldElement> {
    let zero = value.field().zero();
    acceptor.map_outputs(|&b| if b { value } else { zero })
}

pub fn thue_morse() -> Dfao<FieldElement> {
    let f = GaloisField::prime(2).unwrap();
    Dfao::new(
        2,
        vec![vec![0, 1], vec![1, 0]],
        0,
        vec![f.zero(), f.one()],
        Direction::Lsd,
    )
    .unwrap()
}

/// A sparse series: coefficient machine plus the forms it was built from.
pub struct SparseSeriesCase {
    pub name: String,
    pub machine: Dfao<FieldElement>,
}

/// Sparse series over `F_2`, `F_3`, `F_4` and `F_9`, built from unions of
/// canonical forms with up to three cycles and nonzero coefficients.
pub fn sparse_series_corpus() -> Vec<SparseSeriesCase> {
    let mut out = Vec::new();
    let f2 = GaloisField::prime(2).unwrap();
    let named: [(&str, u32, Vec<Vec<u8>>, Vec<Vec<u8>>); 5] = [
        ("powers-of-two", 2, vec![vec![1], vec![]], vec![vec![0]]),
        ("two-pow-plus-one", 2, vec![vec![1], vec![1]], vec![vec![0]]),
        ("four-pow", 2, vec![vec![1], vec![]], vec![vec![0, 0]]),
        ("monomial-five", 2, vec![vec![1, 0, 1]], vec![]),
        ("mersenne", 2, vec![vec![1], vec![]], vec![vec![1]]),
    ];
    for (name, p, v, w) in named {
        let form = SimpleSparseForm::new(p, v, w).unwrap();
        let acc = form.acceptor(p as usize).unwrap();
        out.push(SparseSeriesCase {
            name: name.into(),
            machine: indicator_machine(&acc, f2.one()),
        });
    }
    let fields = [
        GaloisField::prime(2).unwrap(),
        GaloisField::prime(3).unwrap(),
        GaloisField::new(2, 2).unwrap(),
        GaloisField::new(3, 2).unwrap(),
    ];
    let mut r = rng(0x5eed);
    for i in 0..32 {
        let field = fields[i % fields.len()];
        let p = field.characteristic();
        let parts = r.gen_range(1..=2);
        let mut pieces = Vec::new();
        for _ in 0..parts {
            let s = r.gen_range(0..=3);
            let form = random_integer_form(&mut r, p, s, 3);
            let c = loop {
                let x = field.from_index(r.gen_range(1..field.order())).unwrap();
                if !x.is_zero() {
                    break x;
                }
            };
            pieces.push((form.acceptor(p as usize).unwrap(), c));
        }
        let machine = weighted_machine(field, &pieces);
        out.push(SparseSeriesCase {
            name: format!("random-{}", i),
            machine,
        });
    }
    out
}

/// Acceptors over digit alphabets: supports of the sparse corpus, classic
/// non-sparse languages and small random automata.
pub fn acceptor_corpus() -> Vec<(String, Acceptor, u32)> {
    let mut out = Vec::new();
    for case in sparse_series_corpus() {
        let p = case.machine.alphabet() as u32;
        out.push((
            case.name.clone(),
            case.machine.map_outputs(|x| !x.is_zero()).minimize(),
            p,
        ));
    }
    out.push((
        "thue-morse-odd".into(),
        thue_morse().map_outputs(|x| !x.is_zero()),
        2,
    ));
    out.push(("all-binary".into(), Acceptor::universal(2), 2));
    out.push((
        "canonical-ternary".into(),
        Acceptor::canonical_naturals(3),
        3,
    ));
    // no two consecutive ones
    let fib = Dfao::new(
        2,
        vec![vec![0, 1], vec![0, 2], vec![2, 2]],
        0,
        vec![true, true, false],
        Direction::Msd,
    )
    .unwrap();
    out.push(("fibonacci".into(), fib, 2));
    out.push(("empty".into(), Acceptor::empty(2), 2));
    let mut r = rng(0xacce);
    for i in 0..60 {
        let k = if i % 3 == 0 { 3 } else { 2 };
        let n = r.gen_range(1..=5);
        let delta = (0..n)
            .map(|_| (0..k).map(|_| r.gen_range(0..n)).collect())
            .collect();
        let outputs = (0..n).map(|_| r.gen_bool(0.4)).collect();
        let a = Dfao::new(k, delta, 0, outputs, Direction::Msd).unwrap();
        out.push((format!("random-dfa-{}", i), a, k as u32));
    }
    out
}
