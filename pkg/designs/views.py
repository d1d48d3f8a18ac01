import logging
import math

import numpy as np
from rest_framework import status, viewsets
from rest_framework.decorators import action, api_view
from rest_framework.exceptions import ValidationError
from rest_framework.pagination import PageNumberPagination
from rest_framework.response import Response

from .constructor import SearchBudget, construct
from .exceptions import OofaError
from .fields import make_field
from .indicator import WordLengthPattern, spectrum, wlp, words_frame
from .latin import full_ls_set
from .models import SimulationRun, StoredDesign
from .serializers import (
    ConstructRequestSerializer, FitRequestSerializer, SimulateRequestSerializer, SimulationRunSerializer,
    StoredDesignListSerializer, StoredDesignSerializer,
)
from .simulator import SimConfig, simulate
from .stats import ModelOrder, correlation_matrix, forward_select, model_matrix
from .utils import default_threads

logger = logging.getLogger(__name__)


class DesignPagination(PageNumberPagination):
    page_size = 20
    page_size_query_param = 'page_size'
    max_page_size = 100


def _frame_records(frame):
    return frame.replace({np.nan: None}).to_dict(orient='records')


class StoredDesignViewSet(viewsets.ModelViewSet):
    queryset = StoredDesign.objects.all()
    pagination_class = DesignPagination

    def get_queryset(self):
        params = self.request.query_params
        return (
            StoredDesign.objects
            .for_components(params.get('m'))
            .with_blocks(params.get('k'))
            .order_designs(params.get('sorting'))
        )

    def get_serializer_class(self):
        if self.action == 'list':
            return StoredDesignListSerializer
        return StoredDesignSerializer

    def list(self, request, *args, **kwargs):
        response = super().list(request, *args, **kwargs)
        response.data['total_pages'] = math.ceil(response.data['count'] / self.pagination_class.page_size)
        return response

    def perform_create(self, serializer):
        instance = serializer.save()
        self._store_wlp(instance)

    def perform_update(self, serializer):
        instance = serializer.save()
        self._store_wlp(instance)

    def _store_wlp(self, instance):
        try:
            instance.wlp = wlp(instance.to_design()).as_dict()
        except OofaError as exc:
            logger.warning("no WLP stored for %s: %s", instance.name, exc)
            instance.wlp = {}
        instance.save(update_fields=['wlp'])

    def _design(self):
        return self.get_object().to_design()

    @action(detail=True, methods=['get'])
    def wlp(self, request, pk=None):
        instance = self.get_object()
        if instance.wlp:
            return Response(WordLengthPattern.from_dict(instance.wlp).as_dict())
        try:
            pattern = wlp(instance.to_design())
        except OofaError as exc:
            raise ValidationError({'error': str(exc)})
        return Response(pattern.as_dict())

    @action(detail=True, methods=['get'])
    def indicator(self, request, pk=None):
        try:
            spec = spectrum(self._design())
        except OofaError as exc:
            raise ValidationError({'error': str(exc)})
        return Response({'a0': spec.a0, 'words': _frame_records(words_frame(spec))})

    @action(detail=True, methods=['get'])
    def correlation(self, request, pk=None):
        order = request.query_params.get('order', ModelOrder.SECOND_ORDER.value)
        try:
            frame = correlation_matrix(model_matrix(self._design(), ModelOrder(order)))
        except ValueError:
            raise ValidationError({'order': f"Unknown model order {order!r}."})
        except OofaError as exc:
            raise ValidationError({'error': str(exc)})
        return Response({'labels': list(frame.columns), 'matrix': frame.to_numpy().tolist()})

    @action(detail=True, methods=['post'])
    def fit(self, request, pk=None):
        params = FitRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        data = params.validated_data
        design = self._design()
        response = data.get('response', design.response)
        if response is None:
            raise ValidationError({'response': "The design has no stored response; supply one."})
        if len(response) != design.n:
            raise ValidationError({'response': "One response per run is required."})

        X = model_matrix(design, ModelOrder(data['order']), include_blocks=data['include_blocks'])
        try:
            fit = forward_select(X, response, data['alpha'])
        except (OofaError, ValueError) as exc:
            raise ValidationError({'error': str(exc)})
        table = fit.table().reset_index()
        return Response({
            'selected': list(fit.selected),
            'df': fit.df,
            'sigma2': fit.sigma2,
            'table': _frame_records(table),
        })

    @action(detail=True, methods=['post'])
    def simulate(self, request, pk=None):
        instance = self.get_object()
        params = SimulateRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        config = SimConfig(design=instance.to_design(), **params.validated_data)
        try:
            report = simulate(config, threads=default_threads())
        except OofaError as exc:
            raise ValidationError({'error': str(exc)})

        run = SimulationRun.objects.create(
            design=instance,
            active_effects=config.p,
            reps=config.reps,
            alpha=config.alpha,
            sigma=config.sigma,
            seed=config.seed,
            power=report.power,
            type1_error=report.type1_error,
        )
        return Response(SimulationRunSerializer(run).data, status=status.HTTP_201_CREATED)

    @action(detail=False, methods=['post'])
    def construct(self, request):
        params = ConstructRequestSerializer(data=request.data)
        params.is_valid(raise_exception=True)
        data = params.validated_data
        budget = SearchBudget.from_settings(
            restarts=data.get('restarts'),
            ls_exchanges=data.get('ls_exchanges'),
            row_exchanges=data.get('row_exchanges'),
            seed=data.get('seed'),
        )
        try:
            result = construct(data['m'], data['k'], data['block_size'], budget, threads=default_threads())
        except OofaError as exc:
            raise ValidationError({'error': str(exc)})

        instance = StoredDesign.objects.create(
            name=data['name'],
            source='constructed',
            seed=result.seed,
            wlp=result.wlp.as_dict(),
            provenance=[entry.as_dict() for entry in result.provenance],
            **StoredDesign.fields_for(result.design),
        )
        return Response(StoredDesignSerializer(instance).data, status=status.HTTP_201_CREATED)


class SimulationRunViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = SimulationRun.objects.select_related('design')
    serializer_class = SimulationRunSerializer
    pagination_class = DesignPagination


@api_view(['GET'])
def latin_squares(request):
    try:
        m = int(request.query_params.get('m', 5))
    except ValueError:
        raise ValidationError({'m': "m must be an integer."})
    if m > 7:
        raise ValidationError({'m': "Listing is limited to m <= 7."})
    try:
        squares = full_ls_set(make_field(m))
    except OofaError as exc:
        raise ValidationError({'m': str(exc)})
    return Response({
        'm': m,
        'count': len(squares),
        'squares': [{'index': sq.index, 'cells': sq.cells.tolist()} for sq in squares],
    })
