from rest_framework import serializers

from netlist.exceptions import NetlistError
from netlist.services.bench import parse_bench
from .models import AttackRun


class AttackRunSerializer(serializers.ModelSerializer):
    """
    Serializer for stored attack runs with their traces.
    """
    class Meta:
        model = AttackRun
        fields = [
            'id', 'name', 'status', 'key_inputs', 'options',
            'recovered_key', 'key_verified', 'total_iterations', 'io_pairs',
            'total_seconds', 'unsat_seconds', 'error_message', 'trace',
            'created_at', 'updated_at',
        ]
        read_only_fields = fields


class AttackRequestSerializer(serializers.Serializer):
    """
    Input for POST /api/v1/attacks/: a locked netlist, its oracle and the attack options.
    """
    name = serializers.CharField(max_length=255, required=False, allow_blank=True)
    locked_bench = serializers.CharField()
    oracle_bench = serializers.CharField()
    key_inputs = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    constraints = serializers.DictField(
        child=serializers.IntegerField(min_value=0, max_value=1), required=False, default=dict,
        help_text="Key index -> fixed bit, e.g. {\"0\": 1, \"3\": 0}",
    )
    replay = serializers.ListField(
        child=serializers.RegexField(r'^[01]+$'), required=False, default=list,
        help_text="Distinguishing inputs to replay before solver-found ones",
    )
    replay_only = serializers.BooleanField(required=False, default=False)
    preload = serializers.BooleanField(required=False, default=False)
    max_iterations = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    time_budget = serializers.FloatField(min_value=0, required=False, allow_null=True)

    def _check_bench(self, value, label):
        try:
            parse_bench(value, name=label)
        except NetlistError as exc:
            raise serializers.ValidationError(str(exc))
        return value

    def validate_locked_bench(self, value):
        return self._check_bench(value, 'locked')

    def validate_oracle_bench(self, value):
        return self._check_bench(value, 'oracle')

    def validate_constraints(self, value):
        for index in value:
            if not str(index).isdigit():
                raise serializers.ValidationError(f"key index {index!r} is not a non-negative integer")
        return {str(index): bit for index, bit in value.items()}

    def create(self, validated_data):
        options = {
            name: validated_data.pop(name)
            for name in ('constraints', 'replay', 'replay_only', 'preload', 'max_iterations', 'time_budget')
            if name in validated_data
        }
        return AttackRun.objects.create(options=options, **validated_data)
