from rest_framework import serializers

from netlist.exceptions import NetlistError
from netlist.services.bench import parse_bench
from .models import SweepPoint, SweepRun
from .services.sweep import SUPPORTED_SCHEMES


class SweepPointSerializer(serializers.ModelSerializer):
    class Meta:
        model = SweepPoint
        fields = [
            'key_size', 'io_pairs', 'total_iters', 'total_s', 'io_pairs_s',
            'avg_s', 'unsat_s', 'unsat_pct', 'complete', 'recovered_key',
        ]
        read_only_fields = fields


class SweepRunSerializer(serializers.ModelSerializer):
    """
    Serializer for stored sweeps with their points and trend.
    """
    points = SweepPointSerializer(many=True, read_only=True)

    class Meta:
        model = SweepRun
        fields = [
            'id', 'name', 'max_keys', 'scheme', 'seed', 'options', 'status',
            'fit', 'error_message', 'task_id', 'points', 'created_at', 'updated_at',
        ]
        read_only_fields = fields


class SweepRequestSerializer(serializers.Serializer):
    """
    Input for POST /api/v1/sweeps/: a cone netlist and the largest key size to sweep.
    """
    name = serializers.CharField(max_length=255, required=False, allow_blank=True)
    cone_bench = serializers.CharField()
    max_keys = serializers.IntegerField(min_value=1)
    scheme = serializers.ChoiceField(choices=SUPPORTED_SCHEMES, default='xor')
    seed = serializers.IntegerField(required=False, default=0)
    max_iterations = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    time_budget = serializers.FloatField(min_value=0, required=False, allow_null=True)

    def validate_cone_bench(self, value):
        try:
            parse_bench(value, name='cone')
        except NetlistError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def create(self, validated_data):
        options = {
            name: validated_data.pop(name)
            for name in ('max_iterations', 'time_budget')
            if name in validated_data
        }
        return SweepRun.objects.create(options=options, **validated_data)
