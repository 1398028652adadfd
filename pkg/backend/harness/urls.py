from django.urls import path, include
from rest_framework.routers import DefaultRouter

from .views import SweepRunViewSet

router = DefaultRouter()
router.register(r'', SweepRunViewSet, basename='sweep')

urlpatterns = [
    path('', include(router.urls)),
]
