import io

import pandas as pd

from models import Certificate, HomologyGroup, HomologySummary, Ring
from services.report_service import ReportService


def certificates():
    return [
        Certificate('f_vectors', params={'max_n': 3}, details={'checked': 4}, duration=0.25),
        Certificate('hirsch', params={'space': 's2'}, verdict='fail',
                    witnesses=[{'identity': 'left_hirsch'}], duration=1.5),
    ]


def test_certificate_columns():
    csv_content, error = ReportService.export_certificates(certificates())
    assert error is None
    df = pd.read_csv(io.StringIO(csv_content))
    assert list(df.columns) == ['name', 'verdict', 'params', 'witnesses', 'first_witness', 'checked']
    assert df.loc[1, 'witnesses'] == 1
    assert df.loc[1, 'first_witness'] == '{"identity": "left_hirsch"}'


def test_durations_only_on_request():
    csv_content, _ = ReportService.export_certificates(certificates(), include_duration=True)
    df = pd.read_csv(io.StringIO(csv_content))
    assert df['duration'].tolist() == [0.25, 1.5]


def test_read_back_counts():
    csv_content, _ = ReportService.export_certificates(certificates())
    counts, error = ReportService.read_certificates(csv_content)
    assert error is None
    assert counts == {'total': 2, 'passed': 1, 'failed': ['hirsch']}


def test_read_rejects_missing_columns():
    counts, error = ReportService.read_certificates('name,params\nx,{}\n')
    assert counts is None
    assert 'verdict' in error


def test_f_vector_table():
    csv_content, error = ReportService.export_f_vectors(3)
    assert error is None
    df = pd.read_csv(io.StringIO(csv_content))
    assert df['f_vector'].tolist() == ['1', '2 1', '5 5 1', '12 18 8 1']
    assert df['facets'].tolist() == [0, 2, 5, 8]
    assert set(df['euler_characteristic']) == {1}


def test_homology_table():
    summary = HomologySummary(Ring(), [HomologyGroup(0, 1, []), HomologyGroup(1, 0, [2])])
    csv_content, error = ReportService.export_homology(summary)
    assert error is None
    df = pd.read_csv(io.StringIO(csv_content), dtype=str, keep_default_na=False)
    assert df['torsion'].tolist() == ['', '2']
