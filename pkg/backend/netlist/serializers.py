from rest_framework import serializers


class BenchParseSerializer(serializers.Serializer):
    """
    Input for POST /api/v1/netlists/parse/.
    """
    bench = serializers.CharField(trim_whitespace=False)
    name = serializers.CharField(max_length=255, required=False, default='circuit')


class ConeSummarySerializer(serializers.Serializer):
    root = serializers.CharField()
    gates = serializers.IntegerField(source='gate_count')
    inputs = serializers.IntegerField(source='input_count')
    node_count = serializers.IntegerField()
    insertion_order = serializers.ListField(child=serializers.CharField())
