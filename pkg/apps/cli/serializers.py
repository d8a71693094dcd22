from rest_framework import serializers


class StarDiagnosticsSerializer(serializers.Serializer):
    """The --diagnostics record of the star command"""
    value = serializers.FloatField()
    mean = serializers.FloatField()
    nome = serializers.FloatField(allow_null=True)
    backend = serializers.CharField()
    iterations = serializers.IntegerField()
    residual = serializers.FloatField()


class BatchResultSerializer(serializers.Serializer):
    """One output row of the batch command"""
    line = serializers.IntegerField(min_value=1)
    operation = serializers.CharField()
    operands = serializers.ListField(child=serializers.FloatField())
    result = serializers.FloatField(allow_null=True)
    backend = serializers.CharField(allow_null=True)
    residual = serializers.FloatField(allow_null=True)
    error = serializers.CharField(allow_null=True)
