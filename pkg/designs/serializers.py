from rest_framework import serializers

from .core import BlockOofaDesign, OofaDesign, validate
from .models import SimulationRun, StoredDesign
from .stats import ModelOrder


class StoredDesignSerializer(serializers.ModelSerializer):
    class Meta:
        model = StoredDesign
        fields = [
            'id', 'name', 'm', 'k', 'block_size', 'blocked', 'rows', 'response', 'source', 'seed',
            'wlp', 'provenance', 'created_at', 'updated_at',
        ]
        read_only_fields = ['m', 'block_size', 'wlp', 'provenance', 'created_at', 'updated_at']

    def validate(self, attrs):
        rows = attrs.get('rows', getattr(self.instance, 'rows', None))
        blocked = attrs.get('blocked', getattr(self.instance, 'blocked', True))
        k = attrs.get('k', getattr(self.instance, 'k', None))
        response = attrs.get('response', getattr(self.instance, 'response', None))
        if not rows:
            raise serializers.ValidationError({'rows': "A design needs at least one run."})
        if any(not isinstance(row, list) for row in rows) or len({len(row) for row in rows}) != 1:
            raise serializers.ValidationError({'rows': "Rows must be lists of equal length."})
        if response is not None and len(response) != len(rows):
            raise serializers.ValidationError({'response': "One response per run is required."})

        try:
            if blocked:
                design = BlockOofaDesign.from_grid(rows, k=k, response=response)
            else:
                design = OofaDesign(rows, response)
        except (TypeError, ValueError) as exc:
            raise serializers.ValidationError({'rows': str(exc)})

        violations = validate(design)
        if violations:
            raise serializers.ValidationError({'rows': [str(v) for v in violations]})

        attrs.update(StoredDesign.fields_for(design))
        return attrs


class StoredDesignListSerializer(serializers.ModelSerializer):
    class Meta:
        model = StoredDesign
        fields = ['id', 'name', 'm', 'k', 'block_size', 'source', 'created_at']


class ConstructRequestSerializer(serializers.Serializer):
    name = serializers.CharField(max_length=255)
    m = serializers.IntegerField(min_value=4, max_value=9)
    k = serializers.IntegerField(min_value=1)
    block_size = serializers.IntegerField(min_value=1)
    restarts = serializers.IntegerField(min_value=1, required=False)
    ls_exchanges = serializers.IntegerField(min_value=1, required=False)
    row_exchanges = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)

    def validate_name(self, value):
        if StoredDesign.objects.filter(name=value).exists():
            raise serializers.ValidationError("A design with this name already exists.")
        return value


class FitRequestSerializer(serializers.Serializer):
    alpha = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.05)
    order = serializers.ChoiceField(choices=[o.value for o in ModelOrder], default=ModelOrder.SECOND_ORDER.value)
    include_blocks = serializers.BooleanField(default=True)
    response = serializers.ListField(child=serializers.FloatField(), required=False)


class SimulateRequestSerializer(serializers.Serializer):
    p = serializers.IntegerField(min_value=0)
    reps = serializers.IntegerField(min_value=1, max_value=10000, required=False)
    alpha = serializers.FloatField(min_value=0.0, max_value=1.0, required=False)
    sigma = serializers.FloatField(min_value=0.0, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)


class SimulationRunSerializer(serializers.ModelSerializer):
    design_name = serializers.CharField(source='design.name', read_only=True)

    class Meta:
        model = SimulationRun
        fields = [
            'id', 'design', 'design_name', 'active_effects', 'reps', 'alpha', 'sigma', 'seed',
            'power', 'type1_error', 'created_at',
        ]
        read_only_fields = fields
