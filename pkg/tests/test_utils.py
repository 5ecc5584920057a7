import pytest

from mpsynth import utils
from mpsynth.exceptions import DeadlineExceeded


def test_bits():
    assert utils.bits(0b1011) == [0, 1, 3]
    assert utils.bits(0) == []


def test_mask_of():
    assert utils.mask_of([0, 3]) == 0b1001


def test_submasks():
    assert list(utils.submasks(0b101)) == [0b101, 0b100, 0b001, 0]
    assert list(utils.submasks(0)) == [0]


def test_masks_by_size():
    masks = list(utils.masks_by_size(["g1", "g2", "g3"]))
    assert masks == [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]


def test_masks_by_size_follow_label_order():
    masks = list(utils.masks_by_size(["g2", "g10", "g1"]))
    assert masks == [0b100, 0b010, 0b001, 0b110, 0b101, 0b011, 0b111]


def test_label_list():
    assert utils.label_list(0b101, ["b", "z", "a"]) == ["a", "b"]


def test_antichain():
    assert sorted(utils.antichain([0b001, 0b011, 0b110, 0b010, 0b011])) == [0b011, 0b110]
    assert utils.antichain([]) == []


def test_is_subset():
    assert utils.is_subset(0b001, 0b011)
    assert not utils.is_subset(0b100, 0b011)


def test_deadline():
    assert not utils.Deadline().expired
    utils.Deadline().check()
    with pytest.raises(DeadlineExceeded) as exc_info:
        utils.Deadline(-1).check("here")
    assert exc_info.value.limit == "timeout"
    assert "here" in exc_info.value.message


def test_stopwatch():
    with utils.Stopwatch() as watch:
        sum(range(1000))
    assert watch.ms >= 0
