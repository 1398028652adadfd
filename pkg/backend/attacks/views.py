import logging

from drf_yasg.utils import swagger_auto_schema
from rest_framework import mixins, status, viewsets
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from .models import AttackRun
from .serializers import AttackRequestSerializer, AttackRunSerializer

logger = logging.getLogger(__name__)


class AttackRunViewSet(mixins.CreateModelMixin,
                       mixins.ListModelMixin,
                       mixins.RetrieveModelMixin,
                       viewsets.GenericViewSet):
    """
    SAT attacks on posted netlists. POST runs the attack synchronously and returns
    the stored run with its trace; a run that stops early is stored as failed with
    its partial trace.
    """
    queryset = AttackRun.objects.all()
    serializer_class = AttackRunSerializer
    permission_classes = [AllowAny]

    @swagger_auto_schema(request_body=AttackRequestSerializer, responses={201: AttackRunSerializer})
    def create(self, request, *args, **kwargs):
        request_serializer = AttackRequestSerializer(data=request.data)
        request_serializer.is_valid(raise_exception=True)
        run = request_serializer.save()
        logger.info(f"AttackRun {run.id} created")
        run.execute()
        return Response(AttackRunSerializer(run).data, status=status.HTTP_201_CREATED)
