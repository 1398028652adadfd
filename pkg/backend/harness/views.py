import logging

from django.http import HttpResponse
from drf_yasg import openapi
from drf_yasg.utils import swagger_auto_schema
from rest_framework import mixins, status, viewsets
from rest_framework.decorators import action
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from locklab.exceptions import LockLabError
from .models import SweepRun
from .serializers import SweepRequestSerializer, SweepRunSerializer
from .services.report import iteration_drops, to_csv
from .tasks import run_sweep_task

logger = logging.getLogger(__name__)


class SweepRunViewSet(mixins.CreateModelMixin,
                      mixins.ListModelMixin,
                      mixins.RetrieveModelMixin,
                      viewsets.GenericViewSet):
    """
    Key-size sweeps. POST stores the sweep and queues it on the sweeps queue;
    poll the run until its status is completed, then fetch the report.
    """
    queryset = SweepRun.objects.prefetch_related('points')
    serializer_class = SweepRunSerializer
    permission_classes = [AllowAny]

    @swagger_auto_schema(request_body=SweepRequestSerializer, responses={202: SweepRunSerializer})
    def create(self, request, *args, **kwargs):
        request_serializer = SweepRequestSerializer(data=request.data)
        request_serializer.is_valid(raise_exception=True)
        run = request_serializer.save()
        try:
            run.plan()
        except LockLabError:
            run.delete()
            raise
        result = run_sweep_task.delay(run.id)
        run.task_id = result.id or ''
        run.save(update_fields=['task_id', 'updated_at'])
        logger.info(f"SweepRun {run.id} queued as task {run.task_id}")
        run.refresh_from_db()
        return Response(SweepRunSerializer(run).data, status=status.HTTP_202_ACCEPTED)

    @swagger_auto_schema(
        manual_parameters=[
            openapi.Parameter('format', openapi.IN_QUERY, type=openapi.TYPE_STRING, enum=['json', 'csv']),
        ],
    )
    @action(detail=True, methods=['get'])
    def report(self, request, pk=None):
        """Sweep records as CSV, or as JSON with the fitted trend and the iteration drops."""
        run = self.get_object()
        records = run.records()
        if request.query_params.get('format') == 'csv':
            response = HttpResponse(to_csv(records), content_type='text/csv')
            response['Content-Disposition'] = f'attachment; filename="sweep_{run.id}.csv"'
            return response
        return Response({
            'id': run.id,
            'status': run.status,
            'records': [record.as_dict() for record in records],
            'fit': run.fit or None,
            'drops': [
                {'key_size': size, 'previous': previous, 'total_iters': current}
                for size, previous, current in iteration_drops(records)
            ],
        })
