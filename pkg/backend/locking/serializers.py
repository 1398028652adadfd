from rest_framework import serializers

from .services.keys import LockScheme


class KeyFileSerializer(serializers.Serializer):
    """
    Serializer for the key file written next to a locked bench: scheme, correct
    key bits, key input names and the key-block map.
    """
    scheme = serializers.ChoiceField(choices=[s.value for s in LockScheme])
    key = serializers.RegexField(r'^[01]*$', allow_blank=True)
    key_inputs = serializers.ListField(child=serializers.CharField())
    blocks = serializers.DictField(child=serializers.ListField(child=serializers.IntegerField(min_value=0)), required=False)
    params = serializers.DictField(required=False)

    def validate(self, data):
        if len(data['key']) != len(data['key_inputs']):
            raise serializers.ValidationError(
                f"key has {len(data['key'])} bits for {len(data['key_inputs'])} key inputs"
            )
        width = len(data['key_inputs'])
        for block, indices in data.get('blocks', {}).items():
            if any(i >= width for i in indices):
                raise serializers.ValidationError(f"block {block} references a key index out of range")
        return data
