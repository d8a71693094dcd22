from rest_framework import serializers

from .reports import IdentityId, IdentityReport


class WitnessField(serializers.Field):
    """Operand tuple; a JSON list, or ';'-joined text in CSV"""
    default_error_messages = {
        'invalid': 'Witness must be a list of numbers.',
    }

    def to_representation(self, value):
        if value is None:
            return None
        return [float(v) for v in value]

    def to_internal_value(self, data):
        if data is None or data == '':
            return None
        if isinstance(data, str):
            data = data.split(';')
        try:
            return tuple(float(v) for v in data)
        except (TypeError, ValueError):
            self.fail('invalid')


class IdentityReportSerializer(serializers.Serializer):
    identity_id = serializers.ChoiceField(choices=IdentityId.choices)
    samples = serializers.IntegerField(min_value=0)
    max_residual = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
    witness = WitnessField(allow_null=True, required=False)

    def create(self, validated_data):
        return IdentityReport(**validated_data)
