//! A small scoped work queue.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

/// Apply `f` to every item on `jobs` threads and return the results in item
/// order. Workers stop taking new items after the first failure; the error
/// reported is the one with the smallest index, which is the one a serial
/// run would hit first.
pub fn par_map<T, R, E, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>, (usize, E)>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(usize, &T) -> Result<R, E> + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t).map_err(|e| (i, e))).collect();
    }
    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let slots: Mutex<Vec<Option<Result<R, E>>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                if failed.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(i, &items[i]);
                if r.is_err() {
                    failed.store(true, Ordering::Relaxed);
                }
                slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    let slots = slots.into_inner().unwrap_or_else(|e| e.into_inner());
    let mut out = Vec::with_capacity(items.len());
    for (i, slot) in slots.into_iter().enumerate() {
        match slot {
            Some(Ok(r)) => out.push(r),
            Some(Err(e)) => return Err((i, e)),
            // unreached items all lie past a failed one
            None => unreachable!("item {i} was skipped without an earlier failure"),
        }
    }
    Ok(out)
}

/// Worker count when none is given.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let items: Vec<u64> = (0..100).collect();
        for jobs in [1, 3, 8] {
            let out = par_map(&items, jobs, |_, &x| Ok::<_, ()>(x * x)).unwrap();
            assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn first_failure_wins() {
        let items: Vec<u64> = (0..50).collect();
        for jobs in [1, 4] {
            let err = par_map(&items, jobs, |_, &x| if x % 7 == 6 { Err(x) } else { Ok(x) }).unwrap_err();
            assert_eq!(err, (6, 6));
        }
    }
}
