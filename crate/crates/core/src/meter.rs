//! Per-thread instrumentation of polynomial sizes.
//!
//! Arithmetic reports every product it materializes while a [`Recording`] is
//! alive on the current thread; otherwise observation is a flag check.

use std::cell::{Cell, RefCell};

use serde::Serialize;

use crate::poly::Polynomial;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Measurements {
    pub polys_observed: u64,
    pub max_total_degree: u32,
    pub max_height: u32,
    /// Largest pseudo-division exponent seen at each chain level (1-based
    /// level `s` stored at index `s - 1`).
    pub max_alpha_per_level: Vec<u32>,
}

thread_local! {
    static ACTIVE: Cell<u32> = const { Cell::new(0) };
    static STATE: RefCell<Measurements> = RefCell::new(Measurements::default());
}

/// Guard that collects measurements until [`Recording::finish`].
pub struct Recording {
    saved: Measurements,
    done: bool,
}

impl Recording {
    pub fn start() -> Recording {
        let saved = STATE.with(|s| std::mem::take(&mut *s.borrow_mut()));
        ACTIVE.with(|a| a.set(a.get() + 1));
        Recording { saved, done: false }
    }

    pub fn finish(mut self) -> Measurements {
        self.done = true;
        self.stop()
    }

    fn stop(&mut self) -> Measurements {
        ACTIVE.with(|a| a.set(a.get() - 1));
        let out = STATE.with(|s| std::mem::replace(&mut *s.borrow_mut(), self.saved.clone()));
        // nested recordings fold into the enclosing one
        if ACTIVE.with(Cell::get) > 0 {
            STATE.with(|s| merge(&mut s.borrow_mut(), &out));
        }
        out
    }
}

impl Drop for Recording {
    fn drop(&mut self) {
        if !self.done {
            self.stop();
        }
    }
}

fn merge(into: &mut Measurements, m: &Measurements) {
    into.polys_observed += m.polys_observed;
    into.max_total_degree = into.max_total_degree.max(m.max_total_degree);
    into.max_height = into.max_height.max(m.max_height);
    if into.max_alpha_per_level.len() < m.max_alpha_per_level.len() {
        into.max_alpha_per_level.resize(m.max_alpha_per_level.len(), 0);
    }
    for (a, b) in into.max_alpha_per_level.iter_mut().zip(&m.max_alpha_per_level) {
        *a = (*a).max(*b);
    }
}

fn active() -> bool {
    ACTIVE.with(Cell::get) > 0
}

pub fn observe(p: &Polynomial) {
    if !active() {
        return;
    }
    let deg = p.total_degree().unwrap_or(0);
    let h = p.height();
    STATE.with(|s| {
        let mut s = s.borrow_mut();
        s.polys_observed += 1;
        s.max_total_degree = s.max_total_degree.max(deg);
        s.max_height = s.max_height.max(h);
    });
}

pub fn observe_alphas(alphas: &[u32]) {
    if !active() {
        return;
    }
    STATE.with(|s| {
        let mut s = s.borrow_mut();
        if s.max_alpha_per_level.len() < alphas.len() {
            s.max_alpha_per_level.resize(alphas.len(), 0);
        }
        for (a, &b) in s.max_alpha_per_level.iter_mut().zip(alphas) {
            *a = (*a).max(b);
        }
    });
}
