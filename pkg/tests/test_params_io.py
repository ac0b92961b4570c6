import pytest

from readop import params_io
from readop.cli import packaged_params
from readop.errors import FormatError
from readop.operator import OperatorModel


@pytest.mark.parametrize("mode", ["strict", "toy"])
def test_packaged_files_round_trip_byte_for_byte(mode):
    text = packaged_params(mode)
    pf = params_io.loads(text)
    assert params_io.dumps(pf) == text
    again = params_io.loads(params_io.dumps(pf))
    assert again.model == pf.model
    assert again.model.stages == pf.model.stages


def test_save_load_and_hash(tmp_path, strict_file):
    path = tmp_path / "s.params"
    text = params_io.save(strict_file, path)
    assert params_io.load(path).model == strict_file.model
    assert params_io.file_hash(path) == params_io.text_hash(text)


def test_reports_survive_round_trip(strict_file):
    again = params_io.loads(params_io.dumps(strict_file))
    assert again.reports[1].get("2bn").checked == strict_file.report_for(1).get("2bn").checked


@pytest.mark.parametrize(
    "old,new",
    [
        ("pos_a = 234067", "pos_a = 234068"),
        ("eps = 1/4", "eps = 1/8"),
        ("# readop-params v1", "# readop-params v0"),
        ("stages = 2", "stages = 3"),
        ("a = 4\n", "a = four\n"),
        ("mode = strict", "mode = lax"),
    ],
)
def test_tampering_is_rejected(old, new):
    text = packaged_params("strict")
    assert old in text
    with pytest.raises(FormatError):
        params_io.loads(text.replace(old, new, 1))


def test_duplicate_keys_rejected():
    text = packaged_params("strict").replace("D = 16\n", "D = 16\nD = 32\n")
    with pytest.raises(FormatError, match="duplicate"):
        params_io.loads(text)


def test_models_are_rebuilt_from_free_choices(strict):
    assert OperatorModel.from_specs(strict.specs(), strict.mode, strict.weights) == strict
