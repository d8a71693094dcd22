import csv
import io
import json


def format_real(value):
    """17 significant digits; parses back to the same binary64 value"""
    return '%.17g' % float(value)


def csv_cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, (list, tuple)):
        return ';'.join(format_real(v) for v in value)
    return str(value)


def render_csv(fields, rows):
    """Header plus one line per serialized row, fields in serializer order"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(fields)
    for row in rows:
        writer.writerow([csv_cell(row[field]) for field in fields])
    return buffer.getvalue()


def render_json(rows):
    return json.dumps(rows, indent=2) + '\n'
