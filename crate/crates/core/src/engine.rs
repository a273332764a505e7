//! Propagator scheduling.

use std::collections::VecDeque;

use crate::contractor::ContractorRegistry;
use crate::store::{Contradiction, Store, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropStatus {
    Active,
    /// Satisfied by every remaining tuple; silent until backtrack.
    Entailed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropStats {
    pub propagations: u64,
    pub contract_calls: u64,
    /// Bound values copied into and out of contract calls.
    pub marshalled: u64,
}

pub struct Ctx<'a> {
    pub store: &'a mut Store,
    pub registry: &'a ContractorRegistry,
    pub stats: &'a mut PropStats,
}

pub trait Propagator: Send + Sync {
    fn name(&self) -> &'static str;

    /// Variables whose changes schedule this propagator.
    fn watched(&self) -> Vec<VarId>;

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction>;
}

/// FIFO propagation queue; each propagator is queued at most once.
#[derive(Default)]
pub struct Engine {
    props: Vec<Box<dyn Propagator>>,
    int_watchers: Vec<Vec<usize>>,
    real_watchers: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    events: Vec<VarId>,
}

impl Engine {
    pub fn new() -> Engine {
        Engine::default()
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn propagator(&self, pid: usize) -> &dyn Propagator {
        self.props[pid].as_ref()
    }

    pub(crate) fn add(&mut self, store: &mut Store, p: Box<dyn Propagator>) -> usize {
        let pid = self.props.len();
        let mut watched = p.watched();
        watched.sort_by_key(|v| match v {
            VarId::Int(x) => (0, x.index()),
            VarId::Real(x) => (1, x.index()),
        });
        watched.dedup();
        for v in watched {
            let list = match v {
                VarId::Int(x) => slot(&mut self.int_watchers, x.index()),
                VarId::Real(x) => slot(&mut self.real_watchers, x.index()),
            };
            list.push(pid);
        }
        self.props.push(p);
        self.queued.push(false);
        store.new_passive_flag();
        pid
    }

    pub fn schedule(&mut self, pid: usize) {
        if !self.queued[pid] {
            self.queued[pid] = true;
            self.queue.push_back(pid);
        }
    }

    pub fn schedule_all(&mut self) {
        for pid in 0..self.props.len() {
            self.schedule(pid);
        }
    }

    fn schedule_watchers(&mut self, v: VarId, except: Option<usize>) {
        let list = match v {
            VarId::Int(x) => self.int_watchers.get(x.index()),
            VarId::Real(x) => self.real_watchers.get(x.index()),
        };
        let Some(list) = list else { return };
        for &pid in list {
            if Some(pid) != except && !self.queued[pid] {
                self.queued[pid] = true;
                self.queue.push_back(pid);
            }
        }
    }

    /// Schedules watchers of every variable changed since the last call.
    pub fn schedule_pending(&mut self, store: &mut Store) {
        let mut events = std::mem::take(&mut self.events);
        store.take_events(&mut events);
        for v in events.drain(..) {
            self.schedule_watchers(v, None);
        }
        self.events = events;
    }

    fn clear_queue(&mut self) {
        for pid in self.queue.drain(..) {
            self.queued[pid] = false;
        }
    }

    /// Runs queued propagators until the queue is empty. A propagator is not
    /// rescheduled by its own modifications.
    pub fn fixpoint(
        &mut self,
        store: &mut Store,
        registry: &ContractorRegistry,
        stats: &mut PropStats,
    ) -> Result<(), Contradiction> {
        self.schedule_pending(store);
        let mut events = std::mem::take(&mut self.events);
        let result = loop {
            let Some(pid) = self.queue.pop_front() else {
                break Ok(());
            };
            self.queued[pid] = false;
            if store.is_passive(pid) {
                continue;
            }
            stats.propagations += 1;
            let mut ctx = Ctx {
                store,
                registry,
                stats,
            };
            match self.props[pid].propagate(&mut ctx) {
                Err(c) => break Err(c),
                Ok(PropStatus::Entailed) => store.set_passive(pid),
                Ok(PropStatus::Active) => {}
            }
            store.take_events(&mut events);
            for v in events.drain(..) {
                self.schedule_watchers(v, Some(pid));
            }
        };
        self.events = events;
        if result.is_err() {
            self.clear_queue();
            store.clear_events();
        }
        result
    }
}

fn slot(lists: &mut Vec<Vec<usize>>, i: usize) -> &mut Vec<usize> {
    if lists.len() <= i {
        lists.resize_with(i + 1, Vec::new);
    }
    &mut lists[i]
}
