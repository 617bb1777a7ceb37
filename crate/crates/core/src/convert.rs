//! Conversions between encodings.
//!
//! Only the directions that hold constructively exist as code. The reverse
//! arrows are listed as labelled separations in [`crate::lattice`].

use std::sync::Arc;

use crate::evidence::Accumulator;
use crate::value::Value;
use crate::witnesses::{
    bounded_chain, listable_to_bounded, Branch, Listable, NoethAcc, NoethAccS, NoethExpose, NoethGame, NoethSet,
    WitnessError, DEFAULT_FUEL,
};

/// Stops become `Absurd`: under fresh play the accumulator never holds a
/// duplicate, so a duplicate claim there is unreachable.
pub fn acc_to_strict(w: &NoethAcc) -> NoethAccS {
    match w {
        NoethAcc::Stop(_) => NoethAccS::Absurd,
        NoethAcc::Ask(f) => {
            let f = f.clone();
            NoethAccS::Ask(Branch::new(move |x| Ok(acc_to_strict(&f.apply(x)?))))
        }
    }
}

pub fn strict_to_set(w: &NoethAccS) -> NoethSet {
    match w {
        NoethAccS::Absurd => NoethSet::Absurd,
        NoethAccS::Ask(f) => {
            let f = f.clone();
            NoethSet::Ask(Branch::new(move |x| Ok(strict_to_set(&f.apply(x)?))))
        }
    }
}

pub fn set_to_strict(w: &NoethSet) -> NoethAccS {
    match w {
        NoethSet::Absurd => NoethAccS::Absurd,
        NoethSet::Ask(f) => {
            let f = f.clone();
            NoethAccS::Ask(Branch::new(move |x| Ok(set_to_strict(&f.apply(x)?))))
        }
    }
}

pub fn strict_to_game(w: &NoethAccS) -> NoethGame {
    match w {
        NoethAccS::Absurd => NoethGame::Absurd,
        NoethAccS::Ask(f) => {
            let f = f.clone();
            NoethGame::Ask(Branch::new(move |x| Ok(strict_to_game(&f.apply(x)?))))
        }
    }
}

/// Walks `w` answering every ask with `x0`; the leaf's accumulator is the
/// listing and its completeness proof is the locator.
pub fn expose_to_listable(w: &NoethExpose, x0: &Value, fuel: u64) -> Result<Listable, WitnessError> {
    let mut node = w.clone();
    let mut items = Vec::new();
    for _ in 0..fuel {
        node = match node {
            NoethExpose::Stop(locate) => return Ok(Listable { items, locate }),
            NoethExpose::Tell(v, next) => {
                items.push(v);
                (*next).clone()
            }
            NoethExpose::Ask(f) => {
                items.push(x0.clone());
                f.apply(x0)?
            }
        };
    }
    Err(WitnessError::FuelExhausted(fuel))
}

/// Ask one element; with it in hand the carrier is listable, so continue
/// with the bounded chain of that listing. The first answer occupies
/// iteration 0 of the chain.
pub fn expose_to_acc(w: &NoethExpose) -> NoethAcc {
    expose_to_acc_with_fuel(w, DEFAULT_FUEL)
}

pub fn expose_to_acc_with_fuel(w: &NoethExpose, fuel: u64) -> NoethAcc {
    let w = Arc::new(w.clone());
    NoethAcc::ask(move |v| {
        let listing = expose_to_listable(&w, v, fuel)?;
        let bounded = listable_to_bounded(&listing);
        bounded_chain(bounded, Accumulator::from(vec![v.clone()]))
    })
}
