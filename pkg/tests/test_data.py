"""Dataset parsing, splitting, label bookkeeping, and cost validation."""

import io
import warnings

import numpy as np
import pytest

from labelbudget.data import (
    CostInequalityError,
    CostParams,
    Dataset,
    DatasetFormatError,
    DegenerateStratificationWarning,
    LabelStore,
    load_dataset,
    read_dataset,
    stratified_split,
    validate_costs,
    write_dataset_csv,
)


def _csv(rows, header="f1,f2,label"):
    return io.StringIO(header + "\n" + "\n".join(rows) + "\n")


def _toy(n=40, gamma=0.2, seed=0, d=3):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    n_anom = round(n * gamma)
    y = np.concatenate([np.ones(n_anom, dtype=int), np.zeros(n - n_anom, dtype=int)])
    rng.shuffle(y)
    return Dataset(X, y, gamma, name="toy")


class TestReadDataset:
    def test_parses_features_and_labels(self):
        ds = read_dataset(_csv(["1.0,2.0,0", "3.5,-1.0,1", "0.0,0.0,0", "1,1,0"] * 3), "t")
        assert ds.n == 12 and ds.d == 2
        assert ds.features.dtype == np.float64
        assert set(ds.truth_labels.tolist()) == {0, 1}

    def test_gamma_defaults_to_label_fraction(self):
        ds = read_dataset(_csv(["1,2,0", "3,4,1"] * 6), "t")
        assert ds.gamma == pytest.approx(0.5)

    def test_gamma_override_wins(self):
        ds = read_dataset(_csv(["1,2,0", "3,4,1"] * 6), "t", gamma_override=0.25)
        assert ds.gamma == 0.25

    def test_header_must_end_with_label(self):
        with pytest.raises(DatasetFormatError, match="label"):
            read_dataset(_csv(["1,2,0"] * 12, header="f1,f2,target"), "t")

    def test_empty_file_rejected(self):
        with pytest.raises(DatasetFormatError, match="empty"):
            read_dataset(io.StringIO(""), "t")

    def test_bad_float_names_the_line(self):
        rows = ["1,2,0"] * 12
        rows[6] = "1,oops,0"
        with pytest.raises(DatasetFormatError, match="line 8"):
            read_dataset(_csv(rows), "t")

    def test_nonbinary_label_rejected(self):
        rows = ["1,2,0"] * 12
        rows[3] = "1,2,2"
        with pytest.raises(DatasetFormatError, match="label"):
            read_dataset(_csv(rows), "t")

    def test_ragged_row_rejected(self):
        rows = ["1,2,0"] * 12
        rows[5] = "1,2,3,0"
        with pytest.raises(DatasetFormatError):
            read_dataset(_csv(rows), "t")

    def test_too_small_rejected(self):
        with pytest.raises(DatasetFormatError, match="at least"):
            read_dataset(_csv(["1,2,0", "3,4,1"]), "t")


class TestDatasetValidation:
    def test_nonfinite_features_rejected(self):
        X = np.ones((12, 2))
        X[4, 1] = np.nan
        y = np.r_[np.ones(3, dtype=int), np.zeros(9, dtype=int)]
        with pytest.raises(ValueError, match="finite"):
            Dataset(X, y, 0.25)

    def test_gamma_bounds(self):
        X = np.ones((12, 2))
        y = np.r_[np.ones(3, dtype=int), np.zeros(9, dtype=int)]
        for g in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                Dataset(X, y, g)

    def test_from_arrays_infers_gamma(self):
        ds = _toy(n=50, gamma=0.1)
        assert ds.gamma == pytest.approx(0.1)


class TestCsvRoundTrip:
    def test_floats_survive_exactly(self, tmp_path):
        """repr-formatted floats reload bit for bit."""
        ds = _toy(n=30, seed=3)
        path = write_dataset_csv(ds, tmp_path / "toy.csv")
        back = load_dataset(path)
        assert np.array_equal(back.features, ds.features)
        assert np.array_equal(back.truth_labels, ds.truth_labels)


class TestStratifiedSplit:
    def test_sizes_largest_remainder(self):
        """n=214 lands on 86/85/43, the worked 40/40/20 example."""
        ds = _toy(n=214, gamma=0.0421)
        sp = stratified_split(ds, seed=0)
        assert (len(sp.train_idx), len(sp.val_idx), len(sp.test_idx)) == (86, 85, 43)

    def test_partition_is_exact(self):
        ds = _toy(n=101, gamma=0.15, seed=5)
        sp = stratified_split(ds, seed=2)
        merged = np.concatenate([sp.train_idx, sp.val_idx, sp.test_idx])
        assert sorted(merged.tolist()) == list(range(101))

    def test_sizes_within_one_of_quota(self):
        for n in (10, 47, 100, 333):
            ds = _toy(n=n, gamma=0.3, seed=n)
            sp = stratified_split(ds, seed=0)
            for idx, frac in ((sp.train_idx, 0.4), (sp.val_idx, 0.4), (sp.test_idx, 0.2)):
                assert abs(len(idx) - frac * n) <= 1.0

    def test_anomalies_spread_across_parts(self):
        ds = _toy(n=214, gamma=0.0421)
        sp = stratified_split(ds, seed=0)
        counts = [int(ds.truth_labels[idx].sum()) for idx in (sp.train_idx, sp.val_idx, sp.test_idx)]
        assert counts == [4, 3, 2]

    def test_indices_sorted_int64(self):
        sp = stratified_split(_toy(), seed=1)
        for idx in (sp.train_idx, sp.val_idx, sp.test_idx):
            assert idx.dtype == np.int64
            assert np.all(np.diff(idx) > 0)

    def test_deterministic_per_seed(self):
        ds = _toy(n=60, seed=9)
        a, b = stratified_split(ds, seed=7), stratified_split(ds, seed=7)
        assert np.array_equal(a.train_idx, b.train_idx)
        assert np.array_equal(a.val_idx, b.val_idx)
        c = stratified_split(ds, seed=8)
        assert not np.array_equal(a.train_idx, c.train_idx)

    def test_degenerate_stratification_warns(self):
        X = np.random.default_rng(0).standard_normal((30, 2))
        y = np.zeros(30, dtype=int)
        y[11] = 1
        ds = Dataset(X, y, 1 / 30)
        with pytest.warns(DegenerateStratificationWarning):
            sp = stratified_split(ds, seed=0)
        merged = np.concatenate([sp.train_idx, sp.val_idx, sp.test_idx])
        assert sorted(merged.tolist()) == list(range(30))


class TestLabelStore:
    def _store(self):
        return LabelStore(stratified_split(_toy(n=40, seed=1), seed=0))

    def test_add_and_count(self):
        st = self._store()
        tr = int(st.unlabeled_train()[0])
        va = int(st.unlabeled_val()[0])
        st.add_train(tr, 1)
        st.add_val(va, 0)
        assert st.total_purchased == 2
        assert tr not in st.unlabeled_train()
        assert va not in st.unlabeled_val()

    def test_wrong_pool_rejected(self):
        st = self._store()
        va = int(st.unlabeled_val()[0])
        with pytest.raises(KeyError, match="train"):
            st.add_train(va, 0)

    def test_double_purchase_rejected(self):
        st = self._store()
        tr = int(st.unlabeled_train()[0])
        st.add_train(tr, 0)
        with pytest.raises(KeyError, match="already"):
            st.add_train(tr, 1)

    def test_label_values_checked(self):
        st = self._store()
        tr = int(st.unlabeled_train()[0])
        with pytest.raises(ValueError, match="0 or 1"):
            st.add_train(tr, 2)

    def test_unlabeled_stays_sorted(self):
        st = self._store()
        for i in st.unlabeled_train()[:5].tolist():
            st.add_train(int(i), 0)
        rest = st.unlabeled_train()
        assert np.all(np.diff(rest) > 0)


class TestCostValidation:
    def test_bound_value(self):
        """c_r bound is min(c_fp * (1 - gamma), c_fn * gamma)."""
        bound = validate_costs(CostParams(2.0, 1.0, 0.0), gamma=0.1)
        assert bound == pytest.approx(min(2.0 * 0.9, 1.0 * 0.1))

    def test_equality_is_allowed(self):
        g = 0.05
        validate_costs(CostParams(1.0, 1.0, g), gamma=g)

    def test_violation_raises_with_both_bounds(self):
        with pytest.raises(CostInequalityError) as exc:
            validate_costs(CostParams(1.0, 1.0, 0.2), gamma=0.05)
        msg = str(exc.value)
        assert "0.95" in msg and "0.05" in msg

    def test_negative_cost_rejected(self):
        with pytest.raises(ValueError):
            CostParams(1.0, -1.0, 0.0)

    def test_nonfinite_cost_rejected(self):
        with pytest.raises(ValueError):
            CostParams(float("inf"), 1.0, 0.0)
