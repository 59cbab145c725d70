import io
import json
import logging

import pandas as pd

from services.freehedra import codim_one_faces, f_vector

logger = logging.getLogger(__name__)


class ReportService:

    @staticmethod
    def export_certificates(certificates, include_duration=False):
        """Export certificates to CSV format"""
        try:
            data = []
            for certificate in certificates:
                row = {
                    'name': certificate.name,
                    'verdict': certificate.verdict,
                    'params': json.dumps(certificate.params, sort_keys=True),
                    'witnesses': len(certificate.witnesses),
                    'first_witness': json.dumps(certificate.witnesses[0], sort_keys=True) if certificate.witnesses else '',
                    'checked': certificate.details.get('checked', '')
                }
                if include_duration:
                    row['duration'] = round(certificate.duration or 0.0, 3)
                data.append(row)

            df = pd.DataFrame(data, columns=['name', 'verdict', 'params', 'witnesses', 'first_witness', 'checked']
                              + (['duration'] if include_duration else []))

            # Convert to CSV
            output = io.StringIO()
            df.to_csv(output, index=False)
            csv_content = output.getvalue()
            output.close()

            return csv_content, None

        except Exception as e:
            logger.error(f"Certificate export error: {str(e)}")
            return None, str(e)

    @staticmethod
    def export_f_vectors(max_n):
        """Export f-vectors of F_0..F_max_n to CSV format"""
        try:
            data = []
            for n in range(max_n + 1):
                counts = f_vector(n)
                data.append({
                    'n': n,
                    'f_vector': ' '.join(str(c) for c in counts),
                    'facets': len(codim_one_faces(n)) if n > 0 else 0,
                    'euler_characteristic': sum((-1) ** d * c for d, c in enumerate(counts))
                })

            df = pd.DataFrame(data)

            # Convert to CSV
            output = io.StringIO()
            df.to_csv(output, index=False)
            csv_content = output.getvalue()
            output.close()

            return csv_content, None

        except Exception as e:
            logger.error(f"f-vector export error: {str(e)}")
            return None, str(e)

    @staticmethod
    def export_homology(summary):
        """Export a homology summary to CSV format"""
        try:
            df = pd.DataFrame([{
                'degree': group.degree,
                'rank': group.rank,
                'torsion': ' '.join(str(t) for t in group.torsion)
            } for group in summary.groups], columns=['degree', 'rank', 'torsion'])

            # Convert to CSV
            output = io.StringIO()
            df.to_csv(output, index=False)
            csv_content = output.getvalue()
            output.close()

            return csv_content, None

        except Exception as e:
            logger.error(f"Homology export error: {str(e)}")
            return None, str(e)

    @staticmethod
    def read_certificates(csv_content):
        """Verdict counts from a certificate CSV"""
        try:
            df = pd.read_csv(io.StringIO(csv_content))

            # Validate required columns
            required_columns = ['name', 'verdict']
            missing_columns = [col for col in required_columns if col not in df.columns]
            if missing_columns:
                return None, f"Missing required columns: {', '.join(missing_columns)}"

            counts = df['verdict'].value_counts().to_dict()
            return {
                'total': int(len(df)),
                'passed': int(counts.get('pass', 0)),
                'failed': sorted(df.loc[df['verdict'] != 'pass', 'name'].tolist())
            }, None

        except Exception as e:
            logger.error(f"Certificate import error: {str(e)}")
            return None, str(e)
